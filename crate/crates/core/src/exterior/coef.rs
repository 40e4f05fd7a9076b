use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::chart::Chart;
use crate::error::{Error, Result};
use crate::scalar::{GaussRat, Scalar};

/// Monomial `x^pow · E_wave` with `E_k(x) = exp(i·tau·k·x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub pow: Vec<u32>,
    pub wave: Vec<i64>,
}

impl Mono {
    pub fn one(dim: usize) -> Self {
        Mono {
            pow: vec![0; dim],
            wave: vec![0; dim],
        }
    }

    pub fn degree(&self) -> u32 {
        self.pow.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.pow.iter().all(|&p| p == 0) && self.wave.iter().all(|&k| k == 0)
    }

    fn mul(&self, o: &Mono) -> Mono {
        Mono {
            pow: self.pow.iter().zip(&o.pow).map(|(a, b)| a + b).collect(),
            wave: self.wave.iter().zip(&o.wave).map(|(a, b)| a + b).collect(),
        }
    }
}

/// `exp(2πi·r)` when it lies in ℚ(i), i.e. when `4r` is an integer.
pub fn exact_phase(r: &BigRational) -> Option<GaussRat> {
    let q = r * BigRational::from_integer(BigInt::from(4));
    if !q.is_integer() {
        return None;
    }
    let k = (q.to_integer() % BigInt::from(4)).to_i64()?;
    Some(GaussRat::i_pow(k))
}

/// A finite polynomial–Fourier coefficient function `Σ c x^α E_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoefFn {
    dim: usize,
    terms: BTreeMap<Mono, Scalar>,
}

impl CoefFn {
    pub fn zero(dim: usize) -> Self {
        CoefFn {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        CoefFn::term(dim, Mono::one(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        CoefFn::constant(dim, Scalar::one())
    }

    pub fn term(dim: usize, m: Mono, c: Scalar) -> Self {
        debug_assert_eq!(m.pow.len(), dim);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CoefFn { dim, terms }
    }

    /// The coordinate function `x_j`.
    pub fn coordinate(dim: usize, j: usize) -> Self {
        let mut m = Mono::one(dim);
        m.pow[j] = 1;
        CoefFn::term(dim, m, Scalar::one())
    }

    /// The Fourier mode `E_k`.
    pub fn fourier(wave: &[i64]) -> Self {
        let dim = wave.len();
        CoefFn::term(
            dim,
            Mono {
                pow: vec![0; dim],
                wave: wave.to_vec(),
            },
            Scalar::one(),
        )
    }

    pub fn from_terms(dim: usize, raw: impl IntoIterator<Item = (Mono, Scalar)>) -> Self {
        let mut f = CoefFn::zero(dim);
        for (m, c) in raw {
            f.add_term(m, &c);
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Mono::is_constant)
    }

    /// The constant value, if the function is constant.
    pub fn constant_value(&self) -> Option<Scalar> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_default())
    }

    pub fn coefficient(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub(crate) fn add_term(&mut self, m: Mono, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, o: &CoefFn) -> CoefFn {
        let (mut big, small) = if self.terms.len() >= o.terms.len() {
            (self.clone(), o)
        } else {
            (o.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c);
        }
        big
    }

    pub fn sub(&self, o: &CoefFn) -> CoefFn {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> CoefFn {
        CoefFn {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> CoefFn {
        if s.is_zero() {
            return CoefFn::zero(self.dim);
        }
        CoefFn::from_terms(self.dim, self.terms.iter().map(|(m, c)| (m.clone(), c * s)))
    }

    pub fn mul(&self, o: &CoefFn) -> CoefFn {
        let mut out = CoefFn::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }

    /// `∂_j`, with `∂_j(x^α E_k) = α_j x^{α−e_j} E_k + i·tau·k_j x^α E_k`.
    pub fn deriv(&self, j: usize) -> CoefFn {
        let mut out = CoefFn::zero(self.dim);
        for (m, c) in &self.terms {
            if m.pow[j] > 0 {
                let mut m2 = m.clone();
                m2.pow[j] -= 1;
                out.add_term(m2, &c.scale_int(m.pow[j] as i64));
            }
            if m.wave[j] != 0 {
                let f = Scalar::monomial(GaussRat::i().scale(&BigRational::from_integer(m.wave[j].into())), 1);
                out.add_term(m.clone(), &(c * &f));
            }
        }
        out
    }

    /// Part of `∂_j` acting on the polynomial factor only.
    pub(crate) fn poly_deriv(&self, j: usize) -> CoefFn {
        let mut out = CoefFn::zero(self.dim);
        for (m, c) in &self.terms {
            if m.pow[j] > 0 {
                let mut m2 = m.clone();
                m2.pow[j] -= 1;
                out.add_term(m2, &c.scale_int(m.pow[j] as i64));
            }
        }
        out
    }

    /// Splits by Fourier wave vector.
    pub fn by_wave(&self) -> BTreeMap<Vec<i64>, CoefFn> {
        let mut out: BTreeMap<Vec<i64>, CoefFn> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.wave.clone())
                .or_insert_with(|| CoefFn::zero(self.dim))
                .add_term(m.clone(), c);
        }
        out
    }

    /// Checks the chart's term invariants.
    pub fn check_chart(&self, chart: &Chart) -> Result<()> {
        if self.dim != chart.dim() {
            return Err(Error::InvalidTerm(format!(
                "coefficient of dimension {} on a {}-dimensional chart",
                self.dim,
                chart.dim()
            )));
        }
        for m in self.terms.keys() {
            for (j, ax) in chart.axes().iter().enumerate() {
                if m.pow[j] > 0 && !ax.allows_polynomial() {
                    return Err(Error::InvalidTerm(format!("polynomial term on periodic axis {j}")));
                }
                if m.wave[j] != 0 && !ax.allows_fourier() {
                    return Err(Error::InvalidTerm(format!("Fourier mode on non-periodic axis {j}")));
                }
            }
        }
        Ok(())
    }

    /// Numeric value at a rational point, with `tau = 2π`.
    pub fn evaluate(&self, point: &[BigRational]) -> Complex64 {
        let xs: Vec<f64> = point.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
        let tau = std::f64::consts::TAU;
        self.terms
            .iter()
            .map(|(m, c)| {
                let poly: f64 = m.pow.iter().zip(&xs).map(|(&p, &x)| x.powi(p as i32)).product();
                let phase: f64 = m.wave.iter().zip(&xs).map(|(&k, &x)| k as f64 * x).sum();
                c.to_complex() * Complex64::from_polar(poly, tau * phase)
            })
            .sum()
    }

    /// Exact value at a point where every Fourier phase is a fourth root of
    /// unity; `tau` stays symbolic in the coefficients.
    pub fn evaluate_exact(&self, point: &[BigRational]) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut v = BigRational::one();
            let mut phase_arg = BigRational::zero();
            for (j, x) in point.iter().enumerate() {
                for _ in 0..m.pow[j] {
                    v *= x;
                }
                phase_arg += x * BigRational::from_integer(m.wave[j].into());
            }
            let ph = exact_phase(&phase_arg)
                .ok_or_else(|| Error::BranchIncompatible(format!("phase exp(2πi·{phase_arg}) is not exact")))?;
            acc += &c.scale_gauss(&ph.scale(&v));
        }
        Ok(acc)
    }

    /// Degree bound used for band-limited bases: `(max total poly degree, max |k_j|)`.
    pub fn band(&self) -> (u32, i64) {
        let p = self.terms.keys().map(Mono::degree).max().unwrap_or(0);
        let k = self
            .terms
            .keys()
            .flat_map(|m| m.wave.iter().map(|k| k.abs()))
            .max()
            .unwrap_or(0);
        (p, k)
    }
}

impl fmt::Display for CoefFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = format!("({c})");
                for (j, p) in m.pow.iter().enumerate() {
                    for _ in 0..*p {
                        s.push_str(&format!("*x{j}"));
                    }
                }
                if m.wave.iter().any(|&k| k != 0) {
                    let ks: Vec<String> = m.wave.iter().map(|k| k.to_string()).collect();
                    s.push_str(&format!("*E[{}]", ks.join(",")));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

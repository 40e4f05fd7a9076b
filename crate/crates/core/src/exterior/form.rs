use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;

use super::chart::{ensure_same_chart, same_chart, ChartRef};
use super::coef::{CoefFn, Mono};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Strictly increasing index tuple, stored as a bit mask.
pub type Basis = u32;

pub fn basis_from_indices(idx: &[usize]) -> Result<Basis> {
    let mut mask = 0u32;
    let mut last = None;
    for &i in idx {
        if last.is_some_and(|l| i <= l) {
            return Err(Error::InvalidTerm(format!(
                "index tuple {idx:?} is not strictly increasing"
            )));
        }
        mask |= 1 << i;
        last = Some(i);
    }
    Ok(mask)
}

pub fn basis_indices(mask: Basis) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

fn count_below(mask: Basis, j: usize) -> u32 {
    (mask & ((1u32 << j) - 1)).count_ones()
}

/// Sign of `e_I ∧ e_J` relative to `e_{I∪J}` (0 if they overlap).
pub fn merge_sign(a: Basis, b: Basis) -> i64 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0;
    for j in basis_indices(b) {
        inversions += (a >> j).count_ones() - u32::from(a & (1 << j) != 0);
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Which single contraction a decomposable multivector applies first.
///
/// `LastFirst` is `ι_{v1∧⋯∧vk} = ι_{vk}∘⋯∘ι_{v1}` (apply `ι_{v1}` first); it
/// is the convention under which the binary bracket of Hamiltonian pairs is
/// again a Hamiltonian pair. `FirstFirst` is the reversed composition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlotOrder {
    #[default]
    LastFirst,
    FirstFirst,
}

pub const DEFAULT_SLOT_ORDER: SlotOrder = SlotOrder::LastFirst;

impl SlotOrder {
    pub fn name(self) -> &'static str {
        match self {
            SlotOrder::LastFirst => "last-first",
            SlotOrder::FirstFirst => "first-first",
        }
    }
}

#[derive(Clone, Debug)]
struct Terms {
    chart: ChartRef,
    degree: usize,
    terms: BTreeMap<Basis, CoefFn>,
}

/// Zero is zero in every degree, so the degree only takes part in equality
/// for nonzero values.
impl PartialEq for Terms {
    fn eq(&self, o: &Terms) -> bool {
        same_chart(&self.chart, &o.chart) && self.terms == o.terms && (self.terms.is_empty() || self.degree == o.degree)
    }
}

impl Eq for Terms {}

impl std::hash::Hash for Terms {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.chart.hash(h);
        self.terms.hash(h);
    }
}

impl Terms {
    fn zero(chart: ChartRef, degree: usize) -> Self {
        Terms {
            chart,
            degree,
            terms: BTreeMap::new(),
        }
    }

    fn dim(&self) -> usize {
        self.chart.dim()
    }

    fn add_coef(&mut self, b: Basis, f: &CoefFn) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(g) => {
                *g = g.add(f);
                if g.is_zero() {
                    self.terms.remove(&b);
                }
            }
            None => {
                self.terms.insert(b, f.clone());
            }
        }
    }

    fn checked(chart: ChartRef, degree: usize, raw: Vec<(Vec<usize>, CoefFn)>) -> Result<Self> {
        if degree > chart.dim() && !raw.is_empty() {
            return Err(Error::DegreeMismatch(format!(
                "degree {degree} exceeds chart dimension {}",
                chart.dim()
            )));
        }
        let mut t = Terms::zero(chart.clone(), degree);
        for (idx, f) in raw {
            if idx.len() != degree || idx.iter().any(|&i| i >= chart.dim()) {
                return Err(Error::DegreeMismatch(format!(
                    "index tuple {idx:?} for degree {degree}"
                )));
            }
            f.check_chart(&chart)?;
            t.add_coef(basis_from_indices(&idx)?, &f);
        }
        Ok(t)
    }

    fn combine(&self, o: &Terms, sign: i64) -> Result<Terms> {
        ensure_same_chart(&self.chart, &o.chart)?;
        if self.degree != o.degree && !self.terms.is_empty() && !o.terms.is_empty() {
            return Err(Error::DegreeMismatch(format!("{} vs {}", self.degree, o.degree)));
        }
        let mut out = if self.terms.is_empty() && !o.terms.is_empty() {
            Terms::zero(self.chart.clone(), o.degree)
        } else {
            self.clone()
        };
        for (b, f) in &o.terms {
            out.add_coef(*b, &if sign < 0 { f.neg() } else { f.clone() });
        }
        Ok(out)
    }

    fn map_coefs(&self, g: impl Fn(&CoefFn) -> CoefFn) -> Terms {
        let mut out = Terms::zero(self.chart.clone(), self.degree);
        for (b, f) in &self.terms {
            out.add_coef(*b, &g(f));
        }
        out
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, prefix: &str) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| {
                let idx: Vec<String> = basis_indices(*b).iter().map(|i| format!("{prefix}{i}")).collect();
                if idx.is_empty() {
                    format!("[{c}]")
                } else {
                    format!("[{c}] {}", idx.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A homogeneous differential form on a chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form(Terms);

/// A homogeneous multivector field on a chart; degree 1 is a vector field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiVector(Terms);

pub type VectorField = MultiVector;

macro_rules! shared_api {
    ($ty:ident) => {
        impl $ty {
            pub fn zero(chart: ChartRef, degree: usize) -> Self {
                $ty(Terms::zero(chart, degree))
            }

            /// Builds from `(index tuple, coefficient)` pairs, checking the chart
            /// invariants and summing repeated tuples.
            pub fn from_terms(chart: ChartRef, degree: usize, raw: Vec<(Vec<usize>, CoefFn)>) -> Result<Self> {
                Terms::checked(chart, degree, raw).map($ty)
            }

            pub fn chart(&self) -> &ChartRef {
                &self.0.chart
            }

            pub fn dim(&self) -> usize {
                self.0.dim()
            }

            pub fn degree(&self) -> usize {
                self.0.degree
            }

            pub fn is_zero(&self) -> bool {
                self.0.terms.is_empty()
            }

            pub fn terms(&self) -> &BTreeMap<Basis, CoefFn> {
                &self.0.terms
            }

            pub fn coefficient(&self, idx: &[usize]) -> CoefFn {
                basis_from_indices(idx)
                    .ok()
                    .and_then(|b| self.0.terms.get(&b).cloned())
                    .unwrap_or_else(|| CoefFn::zero(self.dim()))
            }

            pub fn checked_add(&self, o: &$ty) -> Result<$ty> {
                self.0.combine(&o.0, 1).map($ty)
            }

            pub fn checked_sub(&self, o: &$ty) -> Result<$ty> {
                self.0.combine(&o.0, -1).map($ty)
            }

            pub fn scale(&self, s: &Scalar) -> $ty {
                $ty(self.0.map_coefs(|f| f.scale(s)))
            }

            pub fn scale_int(&self, k: i64) -> $ty {
                self.scale(&Scalar::from_int(k))
            }

            pub fn mul_fn(&self, g: &CoefFn) -> $ty {
                $ty(self.0.map_coefs(|f| f.mul(g)))
            }

            /// Same coefficients on another (compatible) chart.
            pub fn rechart(&self, chart: ChartRef) -> Result<$ty> {
                let raw = self
                    .0
                    .terms
                    .iter()
                    .map(|(b, f)| (basis_indices(*b), f.clone()))
                    .collect();
                $ty::from_terms(chart, self.degree(), raw)
            }

            /// Numeric coefficient values at a rational point.
            pub fn evaluate(&self, point: &[BigRational]) -> Result<BTreeMap<Vec<usize>, Complex64>> {
                if !self.chart().contains(point) {
                    return Err(Error::OutsideDomain(format!("{point:?}")));
                }
                Ok(self
                    .0
                    .terms
                    .iter()
                    .map(|(b, f)| (basis_indices(*b), f.evaluate(point)))
                    .collect())
            }

            /// Largest polynomial degree and Fourier index among the coefficients.
            pub fn band(&self) -> (u32, i64) {
                self.0
                    .terms
                    .values()
                    .map(CoefFn::band)
                    .fold((0, 0), |a, b| (a.0.max(b.0), a.1.max(b.1)))
            }
        }

        impl Add for &$ty {
            type Output = $ty;
            /// Panics on chart or degree mismatch; see `checked_add`.
            fn add(self, o: &$ty) -> $ty {
                self.checked_add(o).expect(concat!(stringify!($ty), " addition"))
            }
        }

        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, o: &$ty) -> $ty {
                self.checked_sub(o)
                    .expect(concat!(stringify!($ty), " subtraction"))
            }
        }

        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty(self.0.map_coefs(CoefFn::neg))
            }
        }
    };
}

shared_api!(Form);
shared_api!(MultiVector);

impl Form {
    pub fn function(chart: ChartRef, f: CoefFn) -> Result<Form> {
        Form::from_terms(chart, 0, vec![(vec![], f)])
    }

    pub fn constant(chart: ChartRef, c: Scalar) -> Form {
        let d = chart.dim();
        Form::function(chart, CoefFn::constant(d, c)).expect("constants live on every chart")
    }

    /// `dx_{i1} ∧ ⋯ ∧ dx_{ip}` for a strictly increasing tuple.
    pub fn basis(chart: ChartRef, idx: &[usize]) -> Result<Form> {
        let d = chart.dim();
        Form::from_terms(chart, idx.len(), vec![(idx.to_vec(), CoefFn::one(d))])
    }

    pub fn dx(chart: ChartRef, j: usize) -> Form {
        Form::basis(chart, &[j]).expect("valid axis")
    }

    /// The degree-0 coefficient, for a function.
    pub fn as_function(&self) -> Option<CoefFn> {
        (self.degree() == 0).then(|| self.coefficient(&[]))
    }

    pub fn wedge(&self, o: &Form) -> Result<Form> {
        ensure_same_chart(self.chart(), o.chart())?;
        let degree = self.degree() + o.degree();
        if degree > self.dim() {
            return Ok(Form::zero(self.chart().clone(), degree.min(self.dim() + 1)));
        }
        let mut out = Terms::zero(self.chart().clone(), degree);
        for (ba, fa) in &self.0.terms {
            for (bb, fb) in &o.0.terms {
                let s = merge_sign(*ba, *bb);
                if s != 0 {
                    let prod = fa.mul(fb);
                    out.add_coef(ba | bb, &if s < 0 { prod.neg() } else { prod });
                }
            }
        }
        Ok(Form(out))
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        let dim = self.dim();
        let mut out = Terms::zero(self.chart().clone(), (self.degree() + 1).min(dim + 1));
        if self.degree() >= dim {
            return Form(out);
        }
        for (b, f) in &self.0.terms {
            for j in 0..dim {
                if b & (1 << j) != 0 {
                    continue;
                }
                let df = f.deriv(j);
                if df.is_zero() {
                    continue;
                }
                let s = count_below(*b, j);
                out.add_coef(b | (1 << j), &if s % 2 == 1 { df.neg() } else { df });
            }
        }
        Form(out)
    }

    /// `ι_v` for a vector field: `ι_v(f dx_I) = Σ_{j∈I} (−1)^{pos(j)} v_j f dx_{I∖j}`.
    pub fn interior(&self, v: &VectorField) -> Result<Form> {
        ensure_same_chart(self.chart(), v.chart())?;
        if v.degree() != 1 {
            return Err(Error::DegreeMismatch(format!(
                "expected a vector field, got degree {}",
                v.degree()
            )));
        }
        if self.degree() == 0 {
            return Ok(Form::zero(self.chart().clone(), 0));
        }
        let mut out = Terms::zero(self.chart().clone(), self.degree() - 1);
        for (b, f) in &self.0.terms {
            for j in basis_indices(*b) {
                let Some(vj) = v.0.terms.get(&(1 << j)) else { continue };
                let g = vj.mul(f);
                let s = count_below(*b, j);
                out.add_coef(b & !(1 << j), &if s % 2 == 1 { g.neg() } else { g });
            }
        }
        Ok(Form(out))
    }

    /// Contraction with a single coordinate field `∂_j`.
    fn interior_axis(&self, j: usize) -> Form {
        if self.degree() == 0 {
            return Form::zero(self.chart().clone(), 0);
        }
        let mut out = Terms::zero(self.chart().clone(), self.degree() - 1);
        for (b, f) in &self.0.terms {
            if b & (1 << j) == 0 {
                continue;
            }
            let s = count_below(*b, j);
            out.add_coef(b & !(1 << j), &if s % 2 == 1 { f.neg() } else { f.clone() });
        }
        Form(out)
    }

    /// Iterated contraction with the decomposable `v1 ∧ ⋯ ∧ vk`.
    pub fn contract_fields(&self, fields: &[VectorField], order: SlotOrder) -> Result<Form> {
        if fields.len() > self.degree() {
            return Err(Error::DegreeMismatch(format!(
                "cannot contract {} fields into a {}-form",
                fields.len(),
                self.degree()
            )));
        }
        let mut acc = self.clone();
        let seq: Box<dyn Iterator<Item = &VectorField>> = match order {
            SlotOrder::LastFirst => Box::new(fields.iter()),
            SlotOrder::FirstFirst => Box::new(fields.iter().rev()),
        };
        for v in seq {
            acc = acc.interior(v)?;
        }
        Ok(acc)
    }

    /// Lie derivative, computed coefficient-wise:
    /// `𝓛_v(f dx_I) = v(f) dx_I + f Σ_r dx_{i1} ∧ ⋯ ∧ d(v_{ir}) ∧ ⋯ ∧ dx_{ip}`.
    pub fn lie_derivative(&self, v: &VectorField) -> Result<Form> {
        ensure_same_chart(self.chart(), v.chart())?;
        if v.degree() != 1 {
            return Err(Error::DegreeMismatch("Lie derivative needs a vector field".into()));
        }
        let chart = self.chart().clone();
        let mut out = Form::zero(chart.clone(), self.degree());
        for (b, f) in &self.0.terms {
            let vf = v.apply(f);
            let idx = basis_indices(*b);
            let mut term = Form::from_terms(chart.clone(), self.degree(), vec![(idx.clone(), vf)])?;
            for r in 0..idx.len() {
                let Some(vr) = v.0.terms.get(&(1 << idx[r])) else {
                    continue;
                };
                let mut piece = Form::function(chart.clone(), f.clone())?;
                for (s, &i) in idx.iter().enumerate() {
                    let factor = if s == r {
                        Form::function(chart.clone(), vr.clone())?.d()
                    } else {
                        Form::dx(chart.clone(), i)
                    };
                    piece = piece.wedge(&factor)?;
                }
                term = &term + &piece;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Restricts to the subtorus spanned by `axes` through the origin and
    /// integrates over it (unit periods): the zero Fourier mode of the top
    /// coefficient.
    pub fn integrate_torus(&self, axes: &[usize]) -> Result<Scalar> {
        for &j in axes {
            if j >= self.dim() || !self.chart().is_periodic(j) {
                return Err(Error::NonPeriodicAxis(j));
            }
        }
        if axes.len() != self.degree() {
            return Err(Error::DegreeMismatch(format!(
                "a {}-form is not top-degree on a {}-dimensional subtorus",
                self.degree(),
                axes.len()
            )));
        }
        let b = basis_from_indices(axes)?;
        let Some(f) = self.0.terms.get(&b) else {
            return Ok(Scalar::zero());
        };
        let mut acc = Scalar::zero();
        for (m, c) in f.terms() {
            let on_torus_zero = axes.iter().all(|&j| m.wave[j] == 0);
            let transverse_origin = (0..self.dim()).filter(|j| !axes.contains(j)).all(|j| m.pow[j] == 0);
            if on_torus_zero && transverse_origin {
                acc += c;
            }
        }
        Ok(acc)
    }

    /// Exact coefficient values at a point (see [`CoefFn::evaluate_exact`]).
    pub fn evaluate_exact(&self, point: &[BigRational]) -> Result<BTreeMap<Basis, Scalar>> {
        self.0
            .terms
            .iter()
            .map(|(b, f)| Ok((*b, f.evaluate_exact(point)?)))
            .collect()
    }

    /// Whether every coefficient is a constant.
    pub fn has_constant_coefficients(&self) -> bool {
        self.0.terms.values().all(CoefFn::is_constant)
    }

    /// Component with Fourier wave vector `k` only.
    pub fn wave_component(&self, k: &[i64]) -> Form {
        Form(self.0.map_coefs(|f| {
            CoefFn::from_terms(
                f.dim(),
                f.terms()
                    .iter()
                    .filter(|(m, _)| m.wave == k)
                    .map(|(m, c)| (m.clone(), c.clone())),
            )
        }))
    }

    pub fn waves(&self) -> Vec<Vec<i64>> {
        let mut ws: Vec<Vec<i64>> = self
            .0
            .terms
            .values()
            .flat_map(|f| f.terms().keys().map(|m| m.wave.clone()))
            .collect();
        ws.sort();
        ws.dedup();
        ws
    }

    pub(crate) fn map_coefficients(&self, g: impl Fn(&CoefFn) -> CoefFn) -> Form {
        Form(self.0.map_coefs(g))
    }

    pub(crate) fn interior_coordinate(&self, j: usize) -> Form {
        self.interior_axis(j)
    }
}

impl MultiVector {
    /// Coordinate field `∂_j`.
    pub fn partial(chart: ChartRef, j: usize) -> VectorField {
        let d = chart.dim();
        MultiVector::from_terms(chart, 1, vec![(vec![j], CoefFn::one(d))]).expect("valid axis")
    }

    pub fn vector_field(chart: ChartRef, comps: Vec<CoefFn>) -> Result<VectorField> {
        if comps.len() != chart.dim() {
            return Err(Error::DegreeMismatch(format!(
                "{} components for dimension {}",
                comps.len(),
                chart.dim()
            )));
        }
        let raw = comps.into_iter().enumerate().map(|(j, f)| (vec![j], f)).collect();
        MultiVector::from_terms(chart, 1, raw)
    }

    /// Component `v_j` of a vector field.
    pub fn component(&self, j: usize) -> CoefFn {
        self.0
            .terms
            .get(&(1 << j))
            .cloned()
            .unwrap_or_else(|| CoefFn::zero(self.dim()))
    }

    /// Derivation `v(f) = Σ v_j ∂_j f`.
    pub fn apply(&self, f: &CoefFn) -> CoefFn {
        let mut out = CoefFn::zero(f.dim());
        for (b, vj) in &self.0.terms {
            let j = b.trailing_zeros() as usize;
            out = out.add(&vj.mul(&f.deriv(j)));
        }
        out
    }

    pub fn wedge(&self, o: &MultiVector) -> Result<MultiVector> {
        let (Form(a), Form(b)) = (Form(self.0.clone()), Form(o.0.clone()));
        Form(a).wedge(&Form(b)).map(|f| MultiVector(f.0))
    }

    /// Wedge of a list of vector fields.
    pub fn wedge_all(chart: ChartRef, fields: &[VectorField]) -> Result<MultiVector> {
        let d = chart.dim();
        let mut acc = MultiVector::from_terms(chart, 0, vec![(vec![], CoefFn::one(d))])?;
        for v in fields {
            acc = acc.wedge(v)?;
        }
        Ok(acc)
    }

    /// Lie bracket of vector fields, `[v,w]_j = Σ_i v_i ∂_i w_j − w_i ∂_i v_j`.
    pub fn lie_bracket(&self, w: &VectorField) -> Result<VectorField> {
        ensure_same_chart(self.chart(), w.chart())?;
        if self.degree() != 1 || w.degree() != 1 {
            return Err(Error::DegreeMismatch("Lie bracket needs vector fields".into()));
        }
        let comps = (0..self.dim())
            .map(|j| self.apply(&w.component(j)).sub(&w.apply(&self.component(j))))
            .collect();
        MultiVector::vector_field(self.chart().clone(), comps)
    }
}

/// `ι_m a` for a multivector `m`, C∞-linear in `m`, with basis contractions
/// `ι_{∂_J}` ordered by `order`.
pub fn contract_with(m: &MultiVector, a: &Form, order: SlotOrder) -> Result<Form> {
    ensure_same_chart(m.chart(), a.chart())?;
    if m.degree() > a.degree() {
        return Err(Error::DegreeMismatch(format!(
            "cannot contract a degree-{} multivector into a {}-form",
            m.degree(),
            a.degree()
        )));
    }
    let mut out = Form::zero(a.chart().clone(), a.degree() - m.degree());
    for (b, f) in m.terms() {
        let mut idx = basis_indices(*b);
        if order == SlotOrder::FirstFirst {
            idx.reverse();
        }
        let mut acc = a.clone();
        for j in idx {
            acc = acc.interior_axis(j);
        }
        out = &out + &acc.mul_fn(f);
    }
    Ok(out)
}

pub fn contract(m: &MultiVector, a: &Form) -> Result<Form> {
    contract_with(m, a, DEFAULT_SLOT_ORDER)
}

pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    a.wedge(b)
}

pub fn lie_bracket(v: &VectorField, w: &VectorField) -> Result<VectorField> {
    v.lie_bracket(w)
}

pub fn lie_derivative(v: &VectorField, a: &Form) -> Result<Form> {
    a.lie_derivative(v)
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(f, "dx")
    }
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(f, "pd")
    }
}

/// Monomial helper for tests and generators.
pub fn mono(pow: &[u32], wave: &[i64]) -> Mono {
    Mono {
        pow: pow.to_vec(),
        wave: wave.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::chart::Chart;
    use crate::exterior::parse::{parse_form, parse_vector_field};

    fn r(n: usize) -> ChartRef {
        Chart::euclidean(n)
    }

    #[test]
    fn wedge_examples() {
        let c = r(2);
        let dxdy = Form::basis(c.clone(), &[0, 1]).unwrap();
        assert_eq!(Form::dx(c.clone(), 0).wedge(&Form::dx(c.clone(), 1)).unwrap(), dxdy);
        assert!(Form::dx(c.clone(), 0).wedge(&Form::dx(c.clone(), 0)).unwrap().is_zero());
        let a = parse_form(&c, "x0*dx1").unwrap();
        let b = parse_form(&c, "x1*dx0").unwrap();
        let ab = a.wedge(&b).unwrap();
        assert_eq!(ab, b.wedge(&a).unwrap().scale_int(-1));
        assert_eq!(ab, parse_form(&c, "-x0*x1*dx0^dx1").unwrap());
    }

    #[test]
    fn d_examples() {
        let c = r(2);
        assert_eq!(
            parse_form(&c, "x0*dx1").unwrap().d(),
            parse_form(&c, "dx0^dx1").unwrap()
        );
        let s1 = Chart::torus(1);
        let e = parse_form(&s1, "E[1]").unwrap();
        assert_eq!(e.d(), parse_form(&s1, "i*tau*E[1]*dx0").unwrap());
        let f = parse_form(&c, "x0*x0*x1 + x0").unwrap();
        assert!(f.d().d().is_zero());
    }

    #[test]
    fn contraction_examples() {
        let c = r(2);
        let w = Form::basis(c.clone(), &[0, 1]).unwrap();
        let px = MultiVector::partial(c.clone(), 0);
        let py = MultiVector::partial(c.clone(), 1);
        assert_eq!(w.interior(&px).unwrap(), Form::dx(c.clone(), 1));
        assert_eq!(w.interior(&py).unwrap(), Form::dx(c.clone(), 0).scale_int(-1));
        let c3 = r(3);
        let vol = Form::basis(c3.clone(), &[0, 1, 2]).unwrap();
        let fields: Vec<_> = (0..3).map(|j| MultiVector::partial(c3.clone(), j)).collect();
        let m = MultiVector::wedge_all(c3.clone(), &fields).unwrap();
        let one = Form::constant(c3.clone(), Scalar::one());
        assert_eq!(contract(&m, &vol).unwrap(), one);
        assert_eq!(vol.contract_fields(&fields, SlotOrder::LastFirst).unwrap(), one);
        let two = MultiVector::wedge_all(c3.clone(), &fields[..2]).unwrap();
        assert_eq!(
            contract(&two, &vol).unwrap(),
            vol.contract_fields(&fields[..2], SlotOrder::LastFirst).unwrap()
        );
        assert_eq!(
            contract_with(&two, &vol, SlotOrder::FirstFirst).unwrap(),
            vol.contract_fields(&fields[..2], SlotOrder::FirstFirst).unwrap()
        );
    }

    #[test]
    fn bracket_and_lie_derivative_examples() {
        let c = r(2);
        let px = MultiVector::partial(c.clone(), 0);
        let py = MultiVector::partial(c.clone(), 1);
        assert!(px.lie_bracket(&py).unwrap().is_zero());
        let v = parse_vector_field(&c, "x0*pd1").unwrap();
        let w = parse_vector_field(&c, "x1*pd0").unwrap();
        assert_eq!(
            v.lie_bracket(&w).unwrap(),
            parse_vector_field(&c, "x0*pd0 - x1*pd1").unwrap()
        );
        let u = parse_vector_field(&c, "(x0*x0 + x1)*pd0").unwrap();
        assert!(u.lie_bracket(&u).unwrap().is_zero());
        assert_eq!(
            parse_form(&c, "x0*dx1").unwrap().lie_derivative(&px).unwrap(),
            Form::dx(c.clone(), 1)
        );
        let e = parse_vector_field(&c, "x0*pd0").unwrap();
        assert_eq!(
            Form::dx(c.clone(), 0).lie_derivative(&e).unwrap(),
            Form::dx(c.clone(), 0)
        );
    }

    #[test]
    fn torus_integrals() {
        let t2 = Chart::torus(2);
        assert_eq!(
            parse_form(&t2, "3*dx0^dx1").unwrap().integrate_torus(&[0, 1]).unwrap(),
            Scalar::from_int(3)
        );
        assert!(parse_form(&t2, "E[1,0]*dx0^dx1")
            .unwrap()
            .integrate_torus(&[0, 1])
            .unwrap()
            .is_zero());
        let a = parse_form(&t2, "3*dx0 + E[0,2]*dx1").unwrap();
        assert_eq!(a.integrate_torus(&[0]).unwrap(), Scalar::from_int(3));
        let cyl = Chart::from_code("tr").unwrap();
        assert_eq!(
            Form::dx(cyl.clone(), 1).integrate_torus(&[1]),
            Err(Error::NonPeriodicAxis(1))
        );
    }

    #[test]
    fn evaluation() {
        use crate::scalar::{int, rat};
        let c = r(1);
        let v = parse_form(&c, "x0*x0").unwrap().evaluate(&[rat(3, 2)]).unwrap();
        assert!((v[&vec![]].re - 2.25).abs() < 1e-12);
        let c2 = r(2);
        let a = parse_form(&c2, "(x0 + x1)*dx0^dx1")
            .unwrap()
            .evaluate(&[int(1), int(2)])
            .unwrap();
        assert!((a[&vec![0, 1]].re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn chart_mismatch_is_an_error() {
        let a = Form::dx(r(2), 0);
        let b = Form::dx(Chart::torus(2), 1);
        assert!(matches!(a.wedge(&b), Err(Error::ChartMismatch(_))));
        assert!(a.checked_add(&b).is_err());
    }
}

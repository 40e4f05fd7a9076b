use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exterior::form::{basis_indices, Basis};
use crate::exterior::{primitive, ChartRef, CoefFn, Form, Mono, MultiVector, VectorField};
use crate::linalg::SparseMatrix;
use crate::scalar::Scalar;

/// A closed `(n+1)`-form `ω` on a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreNPlectic {
    omega: Form,
    n: usize,
}

pub fn check_pre_nplectic(omega: Form, n: usize) -> Result<PreNPlectic> {
    PreNPlectic::new(omega, n)
}

impl PreNPlectic {
    pub fn new(omega: Form, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DegreeMismatch("n must be at least 1".into()));
        }
        if n + 1 > omega.dim() {
            return Err(Error::DegreeMismatch(format!(
                "n + 1 = {} exceeds the dimension {}",
                n + 1,
                omega.dim()
            )));
        }
        if !omega.is_zero() && omega.degree() != n + 1 {
            return Err(Error::DegreeMismatch(format!(
                "ω has degree {}, expected {}",
                omega.degree(),
                n + 1
            )));
        }
        let omega = if omega.is_zero() {
            Form::zero(omega.chart().clone(), n + 1)
        } else {
            omega
        };
        let dw = omega.d();
        if !dw.is_zero() {
            return Err(Error::NotClosed(dw.to_string()));
        }
        Ok(PreNPlectic { omega, n })
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chart(&self) -> &ChartRef {
        self.omega.chart()
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    /// Whether `v ↦ ι_v ω` is injective at `point`.
    pub fn nondegenerate_at(&self, point: &[BigRational]) -> Result<bool> {
        if !self.chart().contains(point) {
            return Err(Error::OutsideDomain(format!("{point:?}")));
        }
        let d = self.dim();
        let values = self.omega.evaluate_exact(point)?;
        let at_point = Form::from_terms(
            self.chart().clone(),
            self.n + 1,
            values
                .into_iter()
                .map(|(b, s)| (basis_indices(b), CoefFn::constant(d, s)))
                .collect(),
        )?;
        let (m, _) = contraction_matrix(&at_point, d)?;
        Ok(m.rank() == d)
    }
}

/// Matrix of `v ↦ ι_v ω` for constant `ω`: columns are axes, rows the
/// `n`-index tuples that occur.
fn contraction_matrix(omega: &Form, d: usize) -> Result<(SparseMatrix, Vec<Basis>)> {
    let chart = omega.chart().clone();
    let mut rows: Vec<Basis> = Vec::new();
    let mut cols: Vec<Form> = Vec::with_capacity(d);
    for j in 0..d {
        let c = omega.interior(&MultiVector::partial(chart.clone(), j))?;
        rows.extend(c.terms().keys().copied());
        cols.push(c);
    }
    rows.sort_unstable();
    rows.dedup();
    let pos: BTreeMap<Basis, usize> = rows.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let mut m = SparseMatrix::new(rows.len(), d);
    for (j, c) in cols.iter().enumerate() {
        for (b, f) in c.terms() {
            let v = f.constant_value().ok_or(Error::NonConstantOmega)?;
            m.add(pos[b], j, &v);
        }
    }
    Ok((m, rows))
}

/// A pair `(v, h)` with `ι_v ω + dh = 0`; only constructible through checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianPair {
    v: VectorField,
    h: Form,
}

impl HamiltonianPair {
    pub fn new(p: &PreNPlectic, v: VectorField, h: Form) -> Result<Self> {
        if v.degree() != 1 && !v.is_zero() {
            return Err(Error::DegreeMismatch("v must be a vector field".into()));
        }
        if !h.is_zero() && h.degree() != p.n() - 1 {
            return Err(Error::DegreeMismatch(format!("h must be an {}-form", p.n() - 1)));
        }
        let v = if v.is_zero() {
            MultiVector::zero(p.chart().clone(), 1)
        } else {
            v
        };
        let h = if h.is_zero() {
            Form::zero(p.chart().clone(), p.n() - 1)
        } else {
            h
        };
        let r = p.omega().interior(&v)?.checked_add(&h.d())?;
        if !r.is_zero() {
            return Err(Error::NotHamiltonian(format!("ι_v ω + dh = {r}")));
        }
        Ok(HamiltonianPair { v, h })
    }

    pub fn zero(p: &PreNPlectic) -> Self {
        HamiltonianPair {
            v: MultiVector::zero(p.chart().clone(), 1),
            h: Form::zero(p.chart().clone(), p.n() - 1),
        }
    }

    pub fn v(&self) -> &VectorField {
        &self.v
    }

    pub fn h(&self) -> &Form {
        &self.h
    }

    pub fn add(&self, o: &HamiltonianPair) -> Result<Self> {
        Ok(HamiltonianPair {
            v: self.v.checked_add(&o.v)?,
            h: self.h.checked_add(&o.h)?,
        })
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        HamiltonianPair {
            v: self.v.scale(s),
            h: self.h.scale(s),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero() && self.h.is_zero()
    }
}

impl fmt::Display for HamiltonianPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.v, self.h)
    }
}

/// Solution of `ι_v ω = −dh` together with the pointwise kernel of `ι_(−)ω`.
#[derive(Clone, Debug)]
pub struct HamiltonianSolution {
    pub pair: HamiltonianPair,
    pub kernel: Vec<VectorField>,
}

/// Solves `ι_v ω + dh = 0` for `v`, monomial by monomial, when `ω` has
/// constant coefficients.
pub fn solve_hamiltonian(p: &PreNPlectic, h: &Form) -> Result<HamiltonianSolution> {
    if !p.omega().has_constant_coefficients() {
        return Err(Error::NonConstantOmega);
    }
    let d = p.dim();
    let chart = p.chart().clone();
    let (m, rows) = contraction_matrix(p.omega(), d)?;
    let pos: BTreeMap<Basis, usize> = rows.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let rhs_form = h.d().scale_int(-1);
    let mut by_mono: BTreeMap<Mono, Vec<Scalar>> = BTreeMap::new();
    for (b, f) in rhs_form.terms() {
        let Some(&r) = pos.get(b) else {
            return Err(Error::NotHamiltonian(format!(
                "dh has a component dx{:?} outside the image of ι_(−)ω",
                basis_indices(*b)
            )));
        };
        for (mono, c) in f.terms() {
            by_mono
                .entry(mono.clone())
                .or_insert_with(|| vec![Scalar::zero(); rows.len()])[r] += c;
        }
    }
    let mut comps = vec![CoefFn::zero(d); d];
    for (mono, b) in by_mono {
        let x = m
            .solve(&b)?
            .ok_or_else(|| Error::NotHamiltonian(format!("no v solves the system for the monomial {mono:?}")))?;
        for (j, c) in x {
            comps[j] = comps[j].add(&CoefFn::term(d, mono.clone(), c));
        }
    }
    let v = MultiVector::vector_field(chart.clone(), comps)?;
    let pair = HamiltonianPair::new(p, v, h.clone())?;
    let kernel = m
        .nullspace()
        .into_iter()
        .map(|k| {
            let comps = (0..d)
                .map(|j| CoefFn::constant(d, k.get(&j).cloned().unwrap_or_default()))
                .collect();
            MultiVector::vector_field(chart.clone(), comps)
        })
        .collect::<Result<_>>()?;
    Ok(HamiltonianSolution { pair, kernel })
}

/// Whether `v` is Hamiltonian: `ι_v ω` has a primitive. Returns `h` with
/// `ι_v ω + dh = 0`.
pub fn hamiltonian_form_of(p: &PreNPlectic, v: &VectorField) -> Result<HamiltonianPair> {
    let a = p.omega().interior(v)?;
    if a.is_zero() {
        return HamiltonianPair::new(p, v.clone(), Form::zero(p.chart().clone(), p.n() - 1));
    }
    match primitive(&a) {
        Ok(Some(h)) => return HamiltonianPair::new(p, v.clone(), h.scale_int(-1)),
        Ok(None) | Err(Error::NotClosed(_)) => {}
        Err(e) => return Err(e),
    }
    Err(Error::NotHamiltonian(format!("ι_v ω = {a} is not exact")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{parse_form, parse_vector_field, Chart};
    use crate::scalar::int;

    #[test]
    fn closedness_and_degree() {
        let r2 = Chart::euclidean(2);
        assert!(check_pre_nplectic(parse_form(&r2, "dx0^dx1").unwrap(), 1).is_ok());
        let r3 = Chart::euclidean(3);
        assert!(check_pre_nplectic(parse_form(&r3, "dx0^dx1^dx2").unwrap(), 2).is_ok());
        let bad = parse_form(&r3, "x0*dx1^dx2").unwrap();
        assert!(matches!(check_pre_nplectic(bad, 1), Err(Error::NotClosed(_))));
        assert!(matches!(
            check_pre_nplectic(parse_form(&r3, "dx0^dx1").unwrap(), 2),
            Err(Error::DegreeMismatch(_))
        ));
    }

    #[test]
    fn nondegeneracy() {
        let origin = [int(0), int(0), int(0)];
        let r3 = Chart::euclidean(3);
        let p = check_pre_nplectic(parse_form(&r3, "dx0^dx1").unwrap(), 1).unwrap();
        assert!(!p.nondegenerate_at(&origin).unwrap());
        let vol = check_pre_nplectic(parse_form(&r3, "dx0^dx1^dx2").unwrap(), 2).unwrap();
        assert!(vol.nondegenerate_at(&origin).unwrap());
        let r2 = Chart::euclidean(2);
        let s = check_pre_nplectic(parse_form(&r2, "dx0^dx1").unwrap(), 1).unwrap();
        assert!(s.nondegenerate_at(&[int(3), int(-7)]).unwrap());
    }

    #[test]
    fn solving_for_fields() {
        let r2 = Chart::euclidean(2);
        let p = check_pre_nplectic(parse_form(&r2, "dx0^dx1").unwrap(), 1).unwrap();
        let s = solve_hamiltonian(&p, &parse_form(&r2, "x0").unwrap()).unwrap();
        assert_eq!(s.pair.v(), &parse_vector_field(&r2, "pd1").unwrap());
        assert!(s.kernel.is_empty());
        let s = solve_hamiltonian(&p, &parse_form(&r2, "x1").unwrap()).unwrap();
        assert_eq!(s.pair.v(), &parse_vector_field(&r2, "-pd0").unwrap());
        let r3 = Chart::euclidean(3);
        let q = check_pre_nplectic(parse_form(&r3, "dx0^dx1^dx2").unwrap(), 2).unwrap();
        let s = solve_hamiltonian(&q, &parse_form(&r3, "-x1*dx2").unwrap()).unwrap();
        assert_eq!(s.pair.v(), &parse_vector_field(&r3, "pd0").unwrap());
        let deg = check_pre_nplectic(parse_form(&r3, "dx0^dx1").unwrap(), 1).unwrap();
        let s = solve_hamiltonian(&deg, &parse_form(&r3, "x0").unwrap()).unwrap();
        assert_eq!(s.kernel.len(), 1);
        assert!(matches!(
            solve_hamiltonian(&deg, &parse_form(&r3, "x2").unwrap()),
            Err(Error::NotHamiltonian(_))
        ));
    }

    #[test]
    fn pair_constructor_checks() {
        let r2 = Chart::euclidean(2);
        let p = check_pre_nplectic(parse_form(&r2, "dx0^dx1").unwrap(), 1).unwrap();
        let v = parse_vector_field(&r2, "pd1").unwrap();
        assert!(HamiltonianPair::new(&p, v.clone(), parse_form(&r2, "x0").unwrap()).is_ok());
        assert!(HamiltonianPair::new(&p, v.clone(), parse_form(&r2, "x1").unwrap()).is_err());
        assert_eq!(
            hamiltonian_form_of(&p, &v).unwrap().h(),
            &parse_form(&r2, "x0").unwrap()
        );
        let t2 = Chart::torus(2);
        let pt = check_pre_nplectic(parse_form(&t2, "dx0^dx1").unwrap(), 1).unwrap();
        assert!(hamiltonian_form_of(&pt, &parse_vector_field(&t2, "pd0").unwrap()).is_err());
    }
}

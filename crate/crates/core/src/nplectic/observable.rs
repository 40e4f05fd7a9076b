use std::fmt;

use serde_json::{json, Value};

use super::structure::{HamiltonianPair, PreNPlectic};
use crate::conventions::Conventions;
use crate::error::{Error, Result};
use crate::exterior::chart::ensure_same_chart as ensure_chart;
use crate::exterior::{Form, SlotOrder, VectorField};
use crate::linfinity::{jacobi_report as generic_report, BracketAlgebra, JacobiReport};
use crate::scalar::{sign_pow, Scalar};

/// A homogeneous element of the modified de Rham complex. Degree `i`
/// holds `Ω^{n−1−i}`, with pairs in degree 0. `Null` stands for the zero
/// element of a degree outside `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observable {
    Pair(HamiltonianPair),
    Higher { degree: usize, form: Form },
    Null { degree: i64 },
}

/// Prefactor `(−1)^{⌊(k−1)/2⌋}` of the `k`-ary bracket.
pub fn arity_sign(k: usize) -> i64 {
    sign_pow(((k.max(1) - 1) / 2) as i64)
}

impl Observable {
    pub fn form(p: &PreNPlectic, degree: usize, form: Form) -> Result<Self> {
        if degree == 0 || degree >= p.n() {
            return Err(Error::DegreeMismatch(format!(
                "observable degree {degree} must lie in 1..{}",
                p.n()
            )));
        }
        ensure_chart(p.chart(), form.chart())?;
        let want = p.n() - 1 - degree;
        if form.is_zero() {
            return Ok(Observable::Higher {
                degree,
                form: Form::zero(p.chart().clone(), want),
            });
        }
        if form.degree() != want {
            return Err(Error::DegreeMismatch(format!(
                "degree-{degree} observables are {want}-forms"
            )));
        }
        Ok(Observable::Higher { degree, form })
    }

    pub fn zero(p: &PreNPlectic, degree: i64) -> Self {
        if degree == 0 {
            Observable::Pair(HamiltonianPair::zero(p))
        } else if degree > 0 && (degree as usize) < p.n() {
            let degree = degree as usize;
            Observable::Higher {
                degree,
                form: Form::zero(p.chart().clone(), p.n() - 1 - degree),
            }
        } else {
            Observable::Null { degree }
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            Observable::Pair(_) => 0,
            Observable::Higher { degree, .. } => *degree as i64,
            Observable::Null { degree } => *degree,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Observable::Pair(p) => p.is_zero(),
            Observable::Higher { form, .. } => form.is_zero(),
            Observable::Null { .. } => true,
        }
    }

    pub fn pair(&self) -> Option<&HamiltonianPair> {
        match self {
            Observable::Pair(p) => Some(p),
            _ => None,
        }
    }

    /// The differential-form part: `h` for pairs, the payload otherwise.
    pub fn form_part(&self) -> Option<&Form> {
        match self {
            Observable::Pair(p) => Some(p.h()),
            Observable::Higher { form, .. } => Some(form),
            Observable::Null { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Observable::Pair(p) => json!({"degree": 0, "kind": "pair", "v": p.v().to_json(), "h": p.h().to_json(),
                "display": self.to_string()}),
            Observable::Higher { degree, form } => {
                json!({"degree": degree, "kind": "form", "form": form.to_json(), "display": self.to_string()})
            }
            Observable::Null { degree } => json!({"degree": degree, "kind": "null", "display": "0"}),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Pair(p) => write!(f, "{p}"),
            Observable::Higher { form, .. } => write!(f, "{form}"),
            Observable::Null { .. } => write!(f, "0"),
        }
    }
}

/// The brackets of `L∞(X, ω)` under a fixed contraction slot order.
#[derive(Clone, Debug)]
pub struct ObservableAlgebra<'a> {
    pub structure: &'a PreNPlectic,
    pub slots: SlotOrder,
}

pub fn l_infty_bracket(p: &PreNPlectic, args: &[Observable]) -> Result<Observable> {
    l_infty_bracket_with(p, args, crate::conventions::DEFAULT_SLOT_ORDER)
}

pub fn l_infty_bracket_with(p: &PreNPlectic, args: &[Observable], slots: SlotOrder) -> Result<Observable> {
    let k = args.len();
    if k == 0 {
        return Err(Error::Arity("brackets take at least one argument".into()));
    }
    for a in args {
        if let Some(f) = a.form_part() {
            ensure_chart(p.chart(), f.chart())?;
        }
    }
    let total: i64 = args.iter().map(Observable::degree).sum::<i64>() + k as i64 - 2;
    if k == 1 {
        return Ok(match &args[0] {
            Observable::Pair(_) | Observable::Null { .. } => Observable::zero(p, total),
            Observable::Higher { degree: 1, form } => Observable::Pair(HamiltonianPair::new(
                p,
                VectorField::zero(p.chart().clone(), 1),
                form.d(),
            )?),
            Observable::Higher { form, .. } => Observable::form(p, total as usize, form.d())?,
        });
    }
    if args.iter().any(|a| a.degree() != 0) || total >= p.n() as i64 {
        return Ok(Observable::zero(p, total));
    }
    let fields: Vec<VectorField> = args
        .iter()
        .map(|a| a.pair().expect("degree-0 observable").v().clone())
        .collect();
    let c = p.omega().contract_fields(&fields, slots)?;
    if k == 2 {
        let v = fields[0].lie_bracket(&fields[1])?;
        return Ok(Observable::Pair(HamiltonianPair::new(p, v, c)?));
    }
    Observable::form(p, total as usize, c.scale_int(arity_sign(k)))
}

impl BracketAlgebra for ObservableAlgebra<'_> {
    type Elem = Observable;

    fn degree(&self, x: &Observable) -> i64 {
        x.degree()
    }

    fn bracket(&self, args: &[Observable]) -> Result<Observable> {
        l_infty_bracket_with(self.structure, args, self.slots)
    }

    fn combine(&self, terms: Vec<(i64, Observable)>, degree: i64) -> Result<Observable> {
        let mut acc = Observable::zero(self.structure, degree);
        for (s, x) in terms {
            if x.is_zero() {
                continue;
            }
            if x.degree() != degree {
                return Err(Error::DegreeMismatch(format!(
                    "cannot add degree {} to degree {degree}",
                    x.degree()
                )));
            }
            let s = Scalar::from(s);
            acc = match (acc, x) {
                (Observable::Pair(a), Observable::Pair(b)) => Observable::Pair(a.add(&b.scale(&s))?),
                (Observable::Higher { degree, form }, Observable::Higher { form: g, .. }) => Observable::Higher {
                    degree,
                    form: form.checked_add(&g.scale(&s))?,
                },
                (a, _) => a,
            };
        }
        Ok(acc)
    }

    fn is_zero(&self, x: &Observable) -> bool {
        x.is_zero()
    }

    fn has_arity(&self, k: usize) -> bool {
        k <= self.structure.n() + 1
    }
}

/// Jacobi report for a set of observables. A binary bracket that leaves the
/// Hamiltonian pairs (possible under the non-default slot order) is
/// reported as a failure instead of an error.
#[derive(Clone, Debug)]
pub struct ObservableJacobiReport {
    pub conventions: Conventions,
    pub report: Option<JacobiReport>,
    pub error: Option<String>,
}

impl ObservableJacobiReport {
    pub fn all_zero(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.all_zero)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "conventions": {"jacobi": self.conventions.jacobi.name(), "slots": self.conventions.slots.name()},
            "all_zero": self.all_zero(),
            "checked": self.report.as_ref().map_or(0, |r| r.checked),
            "failures": self.report.as_ref().map_or_else(Vec::new, |r| r.failures.clone()),
            "error": self.error,
        })
    }
}

pub fn jacobi_report(
    p: &PreNPlectic,
    elements: &[Observable],
    max_arity: usize,
    conventions: Conventions,
) -> Result<ObservableJacobiReport> {
    if max_arity > 5 {
        return Err(Error::Arity(format!("max arity {max_arity} exceeds 5")));
    }
    let alg = ObservableAlgebra {
        structure: p,
        slots: conventions.slots,
    };
    match generic_report(&alg, elements, max_arity, conventions.jacobi) {
        Ok(r) => Ok(ObservableJacobiReport {
            conventions,
            report: Some(r),
            error: None,
        }),
        Err(e @ Error::NotHamiltonian(_)) => Ok(ObservableJacobiReport {
            conventions,
            report: None,
            error: Some(e.to_string()),
        }),
        Err(e) => Err(e),
    }
}

/// `ι_{v1∧⋯∧vk} ω` for Hamiltonian fields.
pub fn ks_cocycle(p: &PreNPlectic, fields: &[VectorField]) -> Result<Form> {
    ks_cocycle_with(p, fields, crate::conventions::DEFAULT_SLOT_ORDER)
}

pub fn ks_cocycle_with(p: &PreNPlectic, fields: &[VectorField], slots: SlotOrder) -> Result<Form> {
    if fields.is_empty() || fields.len() > p.n() + 1 {
        return Err(Error::Arity(format!("expected 1..={} fields", p.n() + 1)));
    }
    for v in fields {
        super::structure::hamiltonian_form_of(p, v)?;
    }
    p.omega().contract_fields(fields, slots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conventions::JacobiConvention;
    use crate::exterior::{parse_form, parse_vector_field, Chart};
    use crate::nplectic::{check_pre_nplectic, solve_hamiltonian};

    fn pair(p: &PreNPlectic, h: &str) -> Observable {
        let h = parse_form(p.chart(), h).unwrap();
        Observable::Pair(solve_hamiltonian(p, &h).unwrap().pair)
    }

    #[test]
    fn sign_prefactors() {
        assert_eq!([3, 4, 5].map(arity_sign), [-1, -1, 1]);
    }

    #[test]
    fn classical_poisson() {
        let r2 = Chart::euclidean(2);
        let p = check_pre_nplectic(parse_form(&r2, "dx0^dx1").unwrap(), 1).unwrap();
        let b = l_infty_bracket(&p, &[pair(&p, "x0"), pair(&p, "x1")]).unwrap();
        let b = b.pair().unwrap();
        assert!(b.v().is_zero());
        assert_eq!(b.h(), &parse_form(&r2, "1").unwrap());
        let swapped = l_infty_bracket(&p, &[pair(&p, "x1"), pair(&p, "x0")]).unwrap();
        assert_eq!(swapped.pair().unwrap().h(), &parse_form(&r2, "-1").unwrap());
    }

    #[test]
    fn ternary_volume() {
        let r3 = Chart::euclidean(3);
        let p = check_pre_nplectic(parse_form(&r3, "dx0^dx1^dx2").unwrap(), 2).unwrap();
        let xs = [pair(&p, "-x1*dx2"), pair(&p, "-x2*dx0"), pair(&p, "-x0*dx1")];
        assert_eq!(xs[0].pair().unwrap().v(), &parse_vector_field(&r3, "pd0").unwrap());
        let t = l_infty_bracket(&p, &xs).unwrap();
        assert_eq!(t.degree(), 1);
        assert_eq!(t.form_part().unwrap(), &parse_form(&r3, "-1").unwrap());
        let four = l_infty_bracket(&p, &[xs[0].clone(), xs[1].clone(), xs[2].clone(), xs[0].clone()]).unwrap();
        assert!(matches!(four, Observable::Null { degree: 2 }));
    }

    #[test]
    fn unary_and_mixed() {
        let r3 = Chart::euclidean(3);
        let p = check_pre_nplectic(parse_form(&r3, "dx0^dx1^dx2").unwrap(), 2).unwrap();
        let f = Observable::form(&p, 1, parse_form(&r3, "x0*x1").unwrap()).unwrap();
        let df = l_infty_bracket(&p, &[f.clone()]).unwrap();
        assert!(df.pair().unwrap().v().is_zero());
        assert_eq!(df.pair().unwrap().h(), &parse_form(&r3, "x1*dx0+x0*dx1").unwrap());
        assert!(l_infty_bracket(&p, &[df]).unwrap().is_zero());
        assert!(l_infty_bracket(&p, &[f, pair(&p, "x0*dx1")]).unwrap().is_zero());
        assert!(matches!(l_infty_bracket(&p, &[]), Err(Error::Arity(_))));
    }

    #[test]
    fn jacobi_on_volume_pairs() {
        let r3 = Chart::euclidean(3);
        let p = check_pre_nplectic(parse_form(&r3, "dx0^dx1^dx2").unwrap(), 2).unwrap();
        let xs = vec![pair(&p, "-x1*dx2"), pair(&p, "x0*dx2"), pair(&p, "x0*x1*dx2+x2^2*dx0")];
        let r = jacobi_report(&p, &xs, 4, Conventions::default()).unwrap();
        assert!(r.all_zero(), "{:?}", r.report);
        let alt = Conventions {
            jacobi: JacobiConvention::Shuffle,
            slots: SlotOrder::FirstFirst,
        };
        assert!(!jacobi_report(&p, &xs, 4, alt).unwrap().all_zero());
    }

    #[test]
    fn kostant_souriau() {
        let r2 = Chart::euclidean(2);
        let p = check_pre_nplectic(parse_form(&r2, "dx0^dx1").unwrap(), 1).unwrap();
        let c = ks_cocycle(&p, &[parse_vector_field(&r2, "pd1").unwrap()]).unwrap();
        assert_eq!(c, parse_form(&r2, "-dx0").unwrap());
        let r3 = Chart::euclidean(3);
        let q = check_pre_nplectic(parse_form(&r3, "dx0^dx1^dx2").unwrap(), 2).unwrap();
        let fs: Vec<_> = ["pd0", "pd1", "pd2"]
            .iter()
            .map(|s| parse_vector_field(&r3, s).unwrap())
            .collect();
        assert_eq!(ks_cocycle(&q, &fs[..2]).unwrap(), parse_form(&r3, "dx2").unwrap());
        assert_eq!(ks_cocycle(&q, &fs).unwrap(), parse_form(&r3, "1").unwrap());
        let t2 = Chart::torus(2);
        let pt = check_pre_nplectic(parse_form(&t2, "dx0^dx1").unwrap(), 1).unwrap();
        assert!(matches!(
            ks_cocycle(&pt, &[parse_vector_field(&t2, "pd0").unwrap()]),
            Err(Error::NotHamiltonian(_))
        ));
    }
}

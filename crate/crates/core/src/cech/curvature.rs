use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::cochain::DeligneCochain;
use super::nerve::{Nerve, NerveRef};
use crate::error::{Error, Result};
use crate::exterior::form::basis_indices;
use crate::exterior::{CoefFn, Form};
use crate::scalar::Scalar;

/// The global closed `(n+1)`-form glued from `dA_α` of a level-`n`
/// connection.
pub fn curvature(c: &DeligneCochain) -> Result<Form> {
    let n = c.level();
    if c.degree() != n + 1 {
        return Err(Error::DegreeMismatch(format!(
            "curvature needs degree {} (level {n}), got {}",
            n + 1,
            c.degree()
        )));
    }
    let report = c.is_cocycle()?;
    if !report.is_cocycle {
        return Err(Error::NotACocycle(report.residuals.join("; ")));
    }
    let nerve = c.nerve();
    let local: Vec<Form> = c.level_forms(0).expect("top forms").iter().map(Form::d).collect();
    for s in nerve.simplices(1) {
        let a = s.faces[0].map.pullback(&local[s.faces[0].index])?;
        let b = s.faces[1].map.pullback(&local[s.faces[1].index])?;
        if a != b {
            return Err(Error::GluingFailure(format!("on {:?}: {a} vs {b}", s.vertices)));
        }
    }
    glue(nerve, &local)
}

/// A global form whose restrictions are the given patch forms.
pub fn glue(nerve: &NerveRef, local: &[Form]) -> Result<Form> {
    let global = local[0]
        .rechart(nerve.global().clone())
        .map_err(|e| Error::GluingFailure(e.to_string()))?;
    for (s, f) in nerve.simplices(0).iter().zip(local) {
        if &s.to_global.pullback(&global)? != f {
            return Err(Error::GluingFailure(format!(
                "patch {:?} does not restrict from {global}",
                s.vertices
            )));
        }
    }
    Ok(global)
}

/// Restriction of a global form to every simplex of level `q`.
pub fn restrict_global(nerve: &Nerve, q: usize, f: &Form) -> Result<Vec<Form>> {
    nerve.simplices(q).iter().map(|s| s.to_global.pullback(f)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralityReport {
    pub integral: bool,
    /// `(axes, period)` over every coordinate subtorus.
    pub periods: Vec<(Vec<usize>, Scalar)>,
}

/// Periods over the coordinate subtori; integral iff all are integers.
pub fn is_integral(omega: &Form) -> Result<IntegralityReport> {
    let chart = omega.chart();
    if let Some(j) = (0..chart.dim()).find(|&j| !chart.is_periodic(j)) {
        return Err(Error::NonPeriodicAxis(j));
    }
    let dw = omega.d();
    if !dw.is_zero() {
        return Err(Error::NotClosed(dw.to_string()));
    }
    let k = omega.degree();
    let periods: Vec<(Vec<usize>, Scalar)> = (0u32..1 << chart.dim())
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| {
            let axes = basis_indices(m);
            let p = omega.integrate_torus(&axes)?;
            Ok((axes, p))
        })
        .collect::<Result<_>>()?;
    let integral = periods.iter().all(|(_, p)| p.as_integer().is_some());
    Ok(IntegralityReport { integral, periods })
}

/// Level-1 connection on the product cover of `T²` with curvature
/// `k dx∧dy`: potentials `k x dy` in each patch's branch coordinates and
/// transition functions `k (x_β − x_α) y`.
pub fn prequantize_torus(k: &BigInt) -> Result<DeligneCochain> {
    let nerve = Nerve::torus(2)?;
    let ks = Scalar::from_rational(BigRational::from_integer(k.clone()));
    let potentials: Vec<Form> = nerve
        .simplices(0)
        .iter()
        .map(|s| Form::from_terms(s.chart.clone(), 1, vec![(vec![1], CoefFn::coordinate(2, 0).scale(&ks))]))
        .collect::<Result<_>>()?;
    let transitions: Vec<Form> = nerve
        .simplices(1)
        .iter()
        .map(|s| {
            // face 0 omits α, so it is β
            let winding = &s.faces[0].offsets[0] - &s.faces[1].offsets[0];
            let coef = CoefFn::coordinate(2, 1).scale(&(&ks * &Scalar::from_rational(winding)));
            Form::function(s.chart.clone(), coef)
        })
        .collect::<Result<_>>()?;
    let forms: BTreeMap<usize, Vec<Form>> = [(0, potentials), (1, transitions)].into_iter().collect();
    DeligneCochain::from_forms(nerve, 1, 2, forms)
}

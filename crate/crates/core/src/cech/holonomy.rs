use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::cochain::DeligneCochain;
use super::nerve::circle_segments;
use crate::error::{Error, Result};
use crate::exterior::coef::exact_phase;
use crate::exterior::{AffineMap, Axis, AxisImage, Chart, CoefFn};
use crate::scalar::{int, GaussRat, Scalar};

/// `∫_s^t f dx` for a one-variable coefficient function, exactly.
pub fn integrate_interval(f: &CoefFn, s: &BigRational, t: &BigRational) -> Result<Scalar> {
    if f.dim() != 1 {
        return Err(Error::DegreeMismatch(
            "interval integrals need a one-variable function".into(),
        ));
    }
    let mut acc = Scalar::zero();
    for (m, c) in f.terms() {
        let (a, k) = (m.pow[0], m.wave[0]);
        if k == 0 {
            let e = BigRational::from_integer((a + 1).into());
            let v = (pow(t, a + 1) - pow(s, a + 1)) / e;
            acc += &(c * &Scalar::from_rational(v));
            continue;
        }
        // ∫ x^a E_k = E_k Σ_j (−1)^j a!/(a−j)! x^{a−j} (iτk)^{−(j+1)}
        let itk_inv = GaussRat::new(BigRational::zero(), BigRational::from_integer(k.into()))
            .inv()
            .expect("k ≠ 0");
        let at = |x: &BigRational| -> Result<Scalar> {
            let ph = exact_phase(&(x * BigRational::from_integer(k.into())))
                .ok_or_else(|| Error::BranchIncompatible(format!("phase at {x} is not exact")))?;
            let mut sum = Scalar::zero();
            let mut fall = BigRational::one();
            let mut g = itk_inv.clone();
            for j in 0..=a {
                let sign = if j % 2 == 0 {
                    BigRational::one()
                } else {
                    -BigRational::one()
                };
                let coeff = sign * &fall * pow(x, a - j);
                sum += &Scalar::monomial(&g * &GaussRat::real(coeff), -(j as i32 + 1));
                fall *= BigRational::from_integer((a - j).into());
                g = &g * &itk_inv;
            }
            Ok(sum.scale_gauss(&ph))
        };
        acc += &(c * &(&at(t)? - &at(s)?));
    }
    Ok(acc)
}

fn pow(x: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Reduces the rational constant term into `[0, 1)`.
pub fn reduce_mod_z(s: &Scalar) -> Scalar {
    let c = s.coeff(0);
    let fl = c.re.floor();
    if fl.is_zero() {
        return s.clone();
    }
    s - &Scalar::from_rational(fl)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HolonomyReport {
    pub axis: usize,
    /// Full value before reduction.
    pub raw: Scalar,
    /// Value modulo ℤ.
    pub value: Scalar,
}

/// Holonomy of a level-`≥1` connection (degree 2) around the loop along
/// `axis` through the origin of the other coordinates. On `S¹` this is the
/// transgression `∫_{S¹}`: segment integrals of `A` plus transition jumps.
pub fn holonomy_along(c: &DeligneCochain, axis: usize) -> Result<HolonomyReport> {
    let nerve = c.nerve().clone();
    let Some(d) = nerve.torus_dim() else {
        return Err(Error::WrongNerve("holonomy needs a circle or torus cover".into()));
    };
    if axis >= d {
        return Err(Error::WrongNerve(format!("axis {axis} out of range for T^{d}")));
    }
    if c.degree() != 2 || c.level() < 1 {
        return Err(Error::DegreeMismatch(
            "holonomy needs a degree-2 cochain of level ≥ 1".into(),
        ));
    }
    let report = c.is_cocycle()?;
    if !report.is_cocycle {
        return Err(Error::NotACocycle(report.residuals.join("; ")));
    }
    let patch = |j: usize| {
        let mut digits = vec![0; d];
        digits[axis] = j;
        nerve.patch(&digits)
    };
    let segs = circle_segments();
    let mut total = Scalar::zero();
    for (j, (s, t)) in segs.iter().enumerate() {
        let simplex = &nerve.simplices(0)[patch(j)];
        let line = Chart::new(vec![Axis::branch(s.clone(), t.clone())])?;
        let images = (0..d)
            .map(|b| {
                if b == axis {
                    AxisImage::Shift {
                        axis: 0,
                        offset: BigRational::zero(),
                    }
                } else {
                    AxisImage::Const(int(0))
                }
            })
            .collect();
        let phi = AffineMap::new(line, simplex.chart.clone(), images)?;
        let a = phi.pullback(&c.form(0, patch(j)).expect("connection form").clone())?;
        total += &integrate_interval(&a.coefficient(&[0]), s, t)?;
    }
    for (from, to, cut) in [(0usize, 1usize, &segs[0].1), (1, 2, &segs[1].1), (2, 0, &segs[0].0)] {
        let (a, b) = (patch(from), patch(to));
        let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
        let (_, e) = nerve.find(&[lo, hi]).expect("edges of the cover");
        let mut point = vec![int(0); d];
        point[axis] = cut.clone();
        let f = c.form(1, e).expect("transition function").coefficient(&[]);
        total += &f.evaluate_exact(&point)?.scale_int(sign);
    }
    Ok(HolonomyReport {
        axis,
        value: reduce_mod_z(&total),
        raw: total,
    })
}

/// Holonomy on the circle cover.
pub fn holonomy(c: &DeligneCochain) -> Result<Scalar> {
    if c.nerve().torus_dim() != Some(1) {
        return Err(Error::WrongNerve("holonomy needs the circle cover".into()));
    }
    Ok(holonomy_along(c, 0)?.value)
}

/// Whether two holonomy values agree modulo ℤ.
pub fn same_mod_z(a: &Scalar, b: &Scalar) -> bool {
    let d = a - b;
    match d.as_rational() {
        Some(r) => r.is_integer(),
        None => reduce_mod_z(&d).is_zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::nerve::Nerve;
    use crate::exterior::Form;
    use crate::scalar::rat;
    use std::collections::BTreeMap;

    fn flat(theta: Scalar, jumps: [Scalar; 3]) -> DeligneCochain {
        let s1 = Nerve::circle();
        let a: Vec<Form> = s1
            .simplices(0)
            .iter()
            .map(|s| Form::dx(s.chart.clone(), 0).scale(&theta))
            .collect();
        let f: Vec<Form> = s1
            .simplices(1)
            .iter()
            .zip(jumps)
            .map(|(s, j)| Form::constant(s.chart.clone(), j))
            .collect();
        let forms: BTreeMap<usize, Vec<Form>> = [(0, a), (1, f)].into_iter().collect();
        DeligneCochain::from_forms(s1, 1, 2, forms).unwrap()
    }

    #[test]
    fn interval_integrals() {
        let x = CoefFn::coordinate(1, 0);
        assert_eq!(integrate_interval(&x, &int(0), &int(1)).unwrap(), Scalar::ratio(1, 2));
        let e = CoefFn::fourier(&[1]);
        assert!(integrate_interval(&e, &int(0), &int(1)).unwrap().is_zero());
        // ∫_0^1 x E_1 = 1/(iτ)
        let xe = x.mul(&e);
        let expect = Scalar::monomial(GaussRat::new(int(0), int(-1)), -1);
        assert_eq!(integrate_interval(&xe, &int(0), &int(1)).unwrap(), expect);
        assert!(integrate_interval(&e, &int(0), &rat(1, 3)).is_err());
    }

    #[test]
    fn circle_holonomies() {
        let z = Scalar::zero();
        assert!(holonomy(&flat(z.clone(), [z.clone(), z.clone(), z.clone()]))
            .unwrap()
            .is_zero());
        assert_eq!(
            holonomy(&flat(Scalar::ratio(2, 7), [z.clone(), z.clone(), z.clone()])).unwrap(),
            Scalar::ratio(2, 7)
        );
        assert_eq!(
            holonomy(&flat(Scalar::ratio(9, 7), [z.clone(), z.clone(), z.clone()])).unwrap(),
            Scalar::ratio(2, 7)
        );
        // edges are (0,1), (0,2), (1,2)
        let jumps = [Scalar::ratio(1, 2), Scalar::ratio(1, 3), Scalar::ratio(1, 6)];
        assert_eq!(holonomy(&flat(z.clone(), jumps)).unwrap(), Scalar::ratio(1, 3));
    }

    #[test]
    fn gauge_invariance() {
        let c = flat(
            Scalar::ratio(1, 5),
            [Scalar::ratio(1, 4), Scalar::zero(), Scalar::zero()],
        );
        let s1 = c.nerve().clone();
        let mut b = DeligneCochain::zero(s1.clone(), 1, 1);
        for (i, s) in s1.simplices(0).iter().enumerate() {
            let g = CoefFn::coordinate(1, 0)
                .mul(&CoefFn::coordinate(1, 0))
                .add(&CoefFn::fourier(&[i as i64 + 1]));
            b.set(0, i, Form::function(s.chart.clone(), g).unwrap()).unwrap();
        }
        b.set_int(1, 4.into()).unwrap();
        let shifted = c.checked_add(&b.total_differential().unwrap()).unwrap();
        assert_eq!(holonomy(&shifted).unwrap(), holonomy(&c).unwrap());
    }
}

use num_rational::BigRational;

use super::coef::{CoefFn, Mono};
use super::form::{basis_indices, Form};
use crate::error::{Error, Result};
use crate::scalar::{GaussRat, Scalar};

/// `(iτk + D)⁻¹ f` for the nilpotent polynomial derivative `D = ∂_j|poly`.
fn invert_shifted(f: &CoefFn, j: usize, k: i64) -> CoefFn {
    let lam = Scalar::monomial(GaussRat::i().scale(&BigRational::from_integer(k.into())), 1);
    let lam_inv = lam.inv().expect("nonzero monomial");
    let mut out = CoefFn::zero(f.dim());
    let mut term = f.scale(&lam_inv);
    let mut sign = 1;
    while !term.is_zero() {
        out = out.add(&if sign > 0 { term.clone() } else { term.neg() });
        term = term.poly_deriv(j).scale(&lam_inv);
        sign = -sign;
    }
    out
}

/// Weight of `x^α dx_I` under the Euler field of the polynomial axes.
fn euler_weight(m: &Mono, idx: &[usize], poly_axes: &[bool]) -> u32 {
    m.degree() + idx.iter().filter(|&&j| poly_axes[j]).count() as u32
}

/// A primitive `h` with `dh = a` for a closed form `a` of positive degree,
/// built from the chart's homotopy operators:
///
/// * a wave-`k ≠ 0` component is `d ι_{∂_j} 𝓛_{∂_j}⁻¹` of itself, for any
///   axis with `k_j ≠ 0`;
/// * the wave-zero component is handled by the Euler homotopy of the
///   polynomial axes.
///
/// Returns `Ok(None)` when `a` has a cohomologically nontrivial part (a
/// constant form along the circle axes).
pub fn primitive(a: &Form) -> Result<Option<Form>> {
    if a.degree() == 0 {
        return Err(Error::DegreeMismatch(
            "a primitive needs a form of positive degree".into(),
        ));
    }
    if !a.d().is_zero() {
        return Err(Error::NotClosed(a.d().to_string()));
    }
    let chart = a.chart().clone();
    let dim = chart.dim();
    let poly_axes: Vec<bool> = chart.axes().iter().map(|ax| ax.allows_polynomial()).collect();
    let mut h = Form::zero(chart.clone(), a.degree() - 1);
    for k in a.waves() {
        let part = a.wave_component(&k);
        if let Some(j) = k.iter().position(|&kj| kj != 0) {
            let inv = part.map_coefficients(|f| invert_shifted(f, j, k[j]));
            h = &h + &inv.interior_coordinate(j);
            continue;
        }
        for (b, f) in part.terms() {
            let idx = basis_indices(*b);
            for (m, c) in f.terms() {
                let w = euler_weight(m, &idx, &poly_axes);
                if w == 0 {
                    return Ok(None);
                }
                let mono = Form::from_terms(
                    chart.clone(),
                    part.degree(),
                    vec![(idx.clone(), CoefFn::term(dim, m.clone(), c.clone()))],
                )?;
                let mut euler = Vec::new();
                for (ax, &p) in poly_axes.iter().enumerate() {
                    if p {
                        euler.push((vec![ax], CoefFn::coordinate(dim, ax)));
                    }
                }
                let e = super::form::MultiVector::from_terms(chart.clone(), 1, euler)?;
                h = &h + &mono.interior(&e)?.scale(&Scalar::ratio(1, w as i64));
            }
        }
    }
    if h.d() != *a {
        return Err(Error::NotAPrimitive(format!("homotopy output fails d h = a for {a}")));
    }
    Ok(Some(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::chart::Chart;

    #[test]
    fn exact_forms_have_primitives() {
        let r3 = Chart::euclidean(3);
        let a = Form::basis(r3.clone(), &[1, 2]).unwrap();
        let h = primitive(&a).unwrap().unwrap();
        assert_eq!(h.d(), a);
        let t2 = Chart::torus(2);
        let e = Form::from_terms(t2.clone(), 1, vec![(vec![0], CoefFn::fourier(&[1, 2]))]).unwrap();
        let de = e.d();
        assert_eq!(primitive(&de).unwrap().unwrap().d(), de);
    }

    #[test]
    fn torus_classes_are_obstructions() {
        let t2 = Chart::torus(2);
        assert_eq!(primitive(&Form::dx(t2.clone(), 0)).unwrap(), None);
        assert!(primitive(&Form::basis(t2, &[0, 1]).unwrap()).unwrap().is_none());
    }

    #[test]
    fn mixed_polynomial_fourier_on_cylinder() {
        let cyl = Chart::from_code("rt").unwrap();
        let f = CoefFn::coordinate(2, 0)
            .mul(&CoefFn::coordinate(2, 0))
            .mul(&CoefFn::fourier(&[0, 3]));
        let a = Form::function(cyl, f).unwrap().d();
        assert_eq!(primitive(&a).unwrap().unwrap().d(), a);
    }
}

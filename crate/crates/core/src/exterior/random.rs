//! Seeded generators of random coefficient functions, forms and fields.

use rand::Rng;

use super::chart::ChartRef;
use super::coef::{CoefFn, Mono};
use super::form::{basis_indices, Form, MultiVector};
use crate::scalar::{GaussRat, Scalar};

/// Size limits for generated data.
#[derive(Clone, Copy, Debug)]
pub struct Band {
    pub max_poly: u32,
    pub max_wave: i64,
    pub max_terms: usize,
}

impl Default for Band {
    fn default() -> Self {
        Band {
            max_poly: 2,
            max_wave: 2,
            max_terms: 3,
        }
    }
}

fn small_scalar<R: Rng>(rng: &mut R) -> Scalar {
    let n = rng.gen_range(-4i64..=4);
    let d = rng.gen_range(1i64..=3);
    let mut s = Scalar::ratio(n, d);
    if rng.gen_bool(0.2) {
        s = &s * &Scalar::i();
    }
    if rng.gen_bool(0.15) {
        s = s.mul_tau_pow(rng.gen_range(-1..=1));
    }
    if s.is_zero() {
        Scalar::from_gauss(GaussRat::i_pow(rng.gen_range(0..4)))
    } else {
        s
    }
}

pub fn random_coef<R: Rng>(rng: &mut R, chart: &ChartRef, band: Band) -> CoefFn {
    let d = chart.dim();
    let n = rng.gen_range(0..=band.max_terms);
    let mut f = CoefFn::zero(d);
    for _ in 0..n {
        let mut m = Mono::one(d);
        for (j, ax) in chart.axes().iter().enumerate() {
            if ax.allows_polynomial() && band.max_poly > 0 {
                m.pow[j] = rng.gen_range(0..=band.max_poly);
            }
            if ax.allows_fourier() && band.max_wave > 0 {
                m.wave[j] = rng.gen_range(-band.max_wave..=band.max_wave);
            }
        }
        let total: u32 = m.pow.iter().sum();
        if total > band.max_poly {
            for p in m.pow.iter_mut() {
                *p = (*p).min(1);
            }
        }
        f.add_term(m, &small_scalar(rng));
    }
    f
}

fn all_bases(dim: usize, degree: usize) -> Vec<u32> {
    (0u32..(1 << dim))
        .filter(|b| b.count_ones() as usize == degree)
        .collect()
}

pub fn random_form<R: Rng>(rng: &mut R, chart: &ChartRef, degree: usize, band: Band) -> Form {
    let mut raw = Vec::new();
    for b in all_bases(chart.dim(), degree) {
        if rng.gen_bool(0.6) {
            raw.push((basis_indices(b), random_coef(rng, chart, band)));
        }
    }
    Form::from_terms(chart.clone(), degree, raw).expect("generated terms respect the chart")
}

pub fn random_field<R: Rng>(rng: &mut R, chart: &ChartRef, band: Band) -> MultiVector {
    let comps = (0..chart.dim()).map(|_| random_coef(rng, chart, band)).collect();
    MultiVector::vector_field(chart.clone(), comps).expect("generated field respects the chart")
}

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cochain::{form_levels, DeligneCochain};
use super::curvature::{curvature, restrict_global};
use super::holonomy::{holonomy_along, same_mod_z};
use super::nerve::NerveRef;
use crate::error::{Error, Result};
use crate::exterior::form::{basis_indices, Basis};
use crate::exterior::random::{random_form, Band};
use crate::exterior::{ChartRef, CoefFn, Form, Mono};
use crate::linalg::{solve_mixed, SparseMatrix};
use crate::scalar::Scalar;

/// Polynomial degree and Fourier band of the gauge parameters searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeBand {
    pub poly: u32,
    pub wave: i64,
}

impl Default for GaugeBand {
    fn default() -> Self {
        GaugeBand { poly: 2, wave: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaugeOutcome {
    /// `c1 − c2 = D b`.
    Witness(DeligneCochain),
    /// No `b` in the band; `obstruction` names a gauge invariant that
    /// differs, when one was found.
    NoWitness { obstruction: Option<String> },
}

impl GaugeOutcome {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, GaugeOutcome::Witness(_))
    }
}

fn monomials(chart: &ChartRef, band: GaugeBand) -> Vec<Mono> {
    let d = chart.dim();
    let mut out = vec![Mono::one(d)];
    for (j, ax) in chart.axes().iter().enumerate() {
        let pows: Vec<u32> = if ax.allows_polynomial() {
            (0..=band.poly).collect()
        } else {
            vec![0]
        };
        let waves: Vec<i64> = if ax.allows_fourier() {
            (-band.wave..=band.wave).collect()
        } else {
            vec![0]
        };
        out = out
            .into_iter()
            .flat_map(|m| {
                let waves = waves.clone();
                pows.iter().flat_map(move |&p| {
                    let m = m.clone();
                    waves.clone().into_iter().map(move |k| {
                        let mut m = m.clone();
                        m.pow[j] = p;
                        m.wave[j] = k;
                        m
                    })
                })
            })
            .filter(|m| m.pow.iter().sum::<u32>() <= band.poly)
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Row {
    Int(usize),
    Form(usize, usize, Basis, Mono),
}

fn rows_of(c: &DeligneCochain) -> BTreeMap<Row, Scalar> {
    let mut out = BTreeMap::new();
    for (i, z) in c.ints().iter().enumerate() {
        if !z.is_zero() {
            out.insert(
                Row::Int(i),
                Scalar::from_rational(num_rational::BigRational::from_integer(z.clone())),
            );
        }
    }
    for (q, fs) in c.forms() {
        for (i, f) in fs.iter().enumerate() {
            for (b, g) in f.terms() {
                for (m, s) in g.terms() {
                    out.insert(Row::Form(*q, i, *b, m.clone()), s.clone());
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
enum Unknown {
    Int(usize),
    Form(usize, usize, Basis, Mono),
}

fn elementary(nerve: &NerveRef, level: usize, degree: usize, u: &Unknown) -> Result<DeligneCochain> {
    let mut b = DeligneCochain::zero(nerve.clone(), level, degree);
    match u {
        Unknown::Int(i) => b.set_int(*i, BigInt::from(1))?,
        Unknown::Form(q, i, mask, m) => {
            let chart = nerve.simplices(*q)[*i].chart.clone();
            let f = Form::from_terms(
                chart.clone(),
                degree - 1 - q,
                vec![(
                    basis_indices(*mask),
                    CoefFn::term(chart.dim(), m.clone(), Scalar::one()),
                )],
            )?;
            b.set(*q, *i, f)?;
        }
    }
    Ok(b)
}

/// Solves `c1 − c2 = D b` over band-limited gauge parameters `b` with
/// integer-valued integer part.
pub fn gauge_reduce(c1: &DeligneCochain, c2: &DeligneCochain, band: GaugeBand) -> Result<GaugeOutcome> {
    let (c1, c2) = (c1.normalized(), c2.normalized());
    let diff = c1.checked_sub(&c2)?;
    let nerve = c1.nerve().clone();
    let (n, m) = (c1.level(), c1.degree());
    if diff.is_zero() {
        return Ok(GaugeOutcome::Witness(DeligneCochain::zero(
            nerve,
            n,
            m.saturating_sub(1),
        )));
    }
    if m == 0 {
        return Ok(GaugeOutcome::NoWitness {
            obstruction: Some("degree-0 cochains admit no gauge parameters".into()),
        });
    }
    let (dp, dw) = diff.forms().values().flatten().fold((0, 0), |(p, w), f| {
        let (fp, fw) = f.band();
        (p.max(fp), w.max(fw))
    });
    let band = GaugeBand {
        poly: band.poly.max(dp + 1),
        wave: band.wave.max(dw),
    };
    let mut unknowns: Vec<Unknown> = (0..nerve.count(m - 1)).map(Unknown::Int).collect();
    for q in form_levels(n, m - 1) {
        let p = m - 2 - q;
        for (i, s) in nerve.simplices(q).iter().enumerate() {
            let masks: Vec<Basis> = (0u32..1 << s.chart.dim())
                .filter(|b| b.count_ones() as usize == p)
                .collect();
            for mono in monomials(&s.chart, band) {
                for &mask in &masks {
                    unknowns.push(Unknown::Form(q, i, mask, mono.clone()));
                }
            }
        }
    }
    let images: Vec<BTreeMap<Row, Scalar>> = unknowns
        .iter()
        .map(|u| Ok(rows_of(&elementary(&nerve, n, m - 1, u)?.total_differential()?)))
        .collect::<Result<_>>()?;
    let target = rows_of(&diff);
    let mut keys: BTreeMap<Row, usize> = BTreeMap::new();
    for r in images.iter().flat_map(BTreeMap::keys).chain(target.keys()) {
        let next = keys.len();
        keys.entry(r.clone()).or_insert(next);
    }
    let mut a = SparseMatrix::new(keys.len(), unknowns.len());
    for (j, img) in images.iter().enumerate() {
        for (r, s) in img {
            a.add(keys[r], j, s);
        }
    }
    let mut rhs = vec![Scalar::zero(); keys.len()];
    for (r, s) in &target {
        rhs[keys[r]] = s.clone();
    }
    let int_cols: Vec<usize> = (0..nerve.count(m - 1)).collect();
    match solve_mixed(&a, &int_cols, &rhs)? {
        Some(x) => {
            let mut b = DeligneCochain::zero(nerve.clone(), n, m - 1);
            for (j, v) in x {
                let e = elementary(&nerve, n, m - 1, &unknowns[j])?;
                b = b.checked_add(&scale(&e, &v)?)?;
            }
            if b.total_differential()? != diff {
                return Err(Error::GluingFailure("gauge witness failed verification".into()));
            }
            Ok(GaugeOutcome::Witness(b))
        }
        None => Ok(GaugeOutcome::NoWitness {
            obstruction: obstruction(&c1, &c2)?,
        }),
    }
}

fn scale(c: &DeligneCochain, s: &Scalar) -> Result<DeligneCochain> {
    let mut out = c.clone();
    for (q, fs) in c.forms() {
        for (i, f) in fs.iter().enumerate() {
            out.set(*q, i, f.scale(s))?;
        }
    }
    if let Some(k) = s.as_integer() {
        for (i, z) in c.ints().iter().enumerate() {
            out.set_int(i, z * &k)?;
        }
    } else if c.ints().iter().any(|z| !z.is_zero()) {
        return Err(Error::InvalidTerm(format!(
            "non-integer multiple {s} of an integer cochain"
        )));
    }
    Ok(out)
}

/// A gauge invariant separating the two cochains: curvature for
/// connections, holonomies for degree-2 cocycles on torus covers.
fn obstruction(c1: &DeligneCochain, c2: &DeligneCochain) -> Result<Option<String>> {
    let (n, m) = (c1.level(), c1.degree());
    let both = c1.is_cocycle()?.is_cocycle && c2.is_cocycle()?.is_cocycle;
    if !both {
        return Ok(None);
    }
    if m == n + 1 {
        let (f1, f2) = (curvature(c1)?, curvature(c2)?);
        if f1 != f2 {
            return Ok(Some(format!("curvature {f1} vs {f2}")));
        }
    }
    if m == 2 && n >= 1 {
        if let Some(d) = c1.nerve().torus_dim() {
            for axis in 0..d {
                let (h1, h2) = (holonomy_along(c1, axis)?.value, holonomy_along(c2, axis)?.value);
                if !same_mod_z(&h1, &h2) {
                    return Ok(Some(format!("holonomy along axis {axis}: {h1} vs {h2}")));
                }
            }
        }
    }
    Ok(None)
}

/// Flat level-1 connection with global potential `Σ a_j dx_j` and
/// transition constants on the edges.
pub fn flat_connection(
    nerve: &NerveRef,
    potential: &[Scalar],
    jumps: &BTreeMap<usize, Scalar>,
) -> Result<DeligneCochain> {
    let d = nerve.dim();
    if potential.len() != d {
        return Err(Error::DegreeMismatch(format!(
            "{} potential coefficients for dimension {d}",
            potential.len()
        )));
    }
    let global = (0..d).fold(Form::zero(nerve.global().clone(), 1), |acc, j| {
        &acc + &Form::dx(nerve.global().clone(), j).scale(&potential[j])
    });
    let a = restrict_global(nerve, 0, &global)?;
    let f = nerve
        .simplices(1)
        .iter()
        .enumerate()
        .map(|(i, s)| Form::constant(s.chart.clone(), jumps.get(&i).cloned().unwrap_or_default()))
        .collect();
    DeligneCochain::from_forms(nerve.clone(), 1, 2, [(0, a), (1, f)].into_iter().collect())
}

/// Flat level-1 connection on a torus cover with `A = 0` and constant
/// transitions `Σ_a h_a w(α_a, β_a)`, where `w(0, 1) = 1 = −w(1, 0)` and
/// `w` vanishes otherwise. Its holonomy along axis `a` is `h_a`.
pub fn winding_connection(nerve: &NerveRef, holonomies: &[Scalar]) -> Result<DeligneCochain> {
    let Some(d) = nerve.torus_dim() else {
        return Err(Error::WrongNerve("winding transitions need a torus cover".into()));
    };
    if holonomies.len() != d {
        return Err(Error::DegreeMismatch(format!(
            "{} holonomies for T^{d}",
            holonomies.len()
        )));
    }
    let digit = |p: usize, a: usize| (p / 3usize.pow(a as u32)) % 3;
    let f = nerve
        .simplices(1)
        .iter()
        .map(|s| {
            let (p, q) = (s.vertices[0], s.vertices[1]);
            let mut c = Scalar::zero();
            for (a, h) in holonomies.iter().enumerate() {
                match (digit(p, a), digit(q, a)) {
                    (0, 1) => c += h,
                    (1, 0) => c = &c - h,
                    _ => {}
                }
            }
            Form::constant(s.chart.clone(), c)
        })
        .collect();
    let a = restrict_global(nerve, 0, &Form::zero(nerve.global().clone(), 1))?;
    DeligneCochain::from_forms(nerve.clone(), 1, 2, [(0, a), (1, f)].into_iter().collect())
}

/// A random cochain with band-limited forms on every slot and, optionally,
/// small integers on the top simplices.
pub fn random_cochain<R: Rng>(
    rng: &mut R,
    nerve: &NerveRef,
    level: usize,
    degree: usize,
    band: Band,
    ints: bool,
) -> Result<DeligneCochain> {
    let mut c = DeligneCochain::zero(nerve.clone(), level, degree);
    for q in form_levels(level, degree) {
        for (i, s) in nerve.simplices(q).iter().enumerate() {
            if rng.gen_bool(0.5) {
                c.set(q, i, random_form(rng, &s.chart, degree - 1 - q, band))?;
            }
        }
    }
    if ints {
        for i in 0..nerve.count(degree) {
            if rng.gen_bool(0.3) {
                c.set_int(i, BigInt::from(rng.gen_range(-2..=2)))?;
            }
        }
    }
    Ok(c)
}

/// A random degree-1 gauge parameter: band-limited patch functions and
/// small integers on edges.
pub fn random_gauge<R: Rng>(rng: &mut R, nerve: &NerveRef, band: GaugeBand) -> Result<DeligneCochain> {
    let mut b = DeligneCochain::zero(nerve.clone(), 1, 1);
    for (i, s) in nerve.simplices(0).iter().enumerate() {
        let monos = monomials(&s.chart, band);
        let mut g = CoefFn::zero(s.chart.dim());
        for _ in 0..2 {
            let m = monos.choose(rng).expect("nonempty band").clone();
            g = g.add(&CoefFn::term(
                s.chart.dim(),
                m,
                Scalar::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
            ));
        }
        b.set(0, i, Form::function(s.chart.clone(), g)?)?;
    }
    for i in 0..nerve.count(1) {
        b.set_int(i, BigInt::from(rng.gen_range(-2..=2)))?;
    }
    Ok(b)
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatSample {
    pub label: Vec<Scalar>,
    pub holonomy: Vec<Scalar>,
    pub realization: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub gauge_equivalent: bool,
    pub same_holonomy: bool,
    pub obstruction: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatModuliReport {
    pub nerve_dim: usize,
    pub level: usize,
    pub seed: u64,
    pub band: GaugeBand,
    pub samples: Vec<FlatSample>,
    pub pairs: Vec<PairCheck>,
    /// Classes found by gauge solves, as sample indices.
    pub classes: Vec<Vec<usize>>,
    /// Holonomy labels of the classes.
    pub class_labels: Vec<Vec<Scalar>>,
    pub classification_matches_holonomy: bool,
    pub holonomy_gauge_invariant: bool,
    pub automorphism_dimension: usize,
    pub automorphisms_are_constants: bool,
}

fn label_pool() -> Vec<Scalar> {
    [(0, 1), (1, 3), (1, 4), (1, 2), (2, 3), (3, 4)]
        .iter()
        .map(|&(a, b)| Scalar::ratio(a, b))
        .collect()
}

/// Samples flat level-1 connections on a circle or torus cover with
/// holonomy labels from a small rational pool, realized either by a global
/// potential or by transition constants and then gauge transformed, and
/// classifies them by explicit gauge solves.
pub fn flat_moduli(
    nerve: &NerveRef,
    level: usize,
    band: GaugeBand,
    samples: usize,
    seed: u64,
) -> Result<FlatModuliReport> {
    if level != 1 {
        return Err(Error::InvalidOverride(format!(
            "flat moduli are implemented for level 1, not {level}"
        )));
    }
    let Some(d) = nerve.torus_dim() else {
        return Err(Error::WrongNerve("flat moduli need a circle or torus cover".into()));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = label_pool();
    let mut cocycles = Vec::with_capacity(samples);
    let mut out_samples = Vec::with_capacity(samples);
    let gauge_band = GaugeBand {
        poly: band.poly.min(1),
        wave: band.wave.min(1),
    };
    for _ in 0..samples {
        let label: Vec<Scalar> = (0..d).map(|_| pool.choose(&mut rng).expect("pool").clone()).collect();
        let by_jumps = rng.gen_bool(0.5);
        let base = if by_jumps {
            winding_connection(nerve, &label)?
        } else {
            flat_connection(nerve, &label, &BTreeMap::new())?
        };
        let g = random_gauge(&mut rng, nerve, gauge_band)?;
        let c = base.checked_add(&g.total_differential()?)?;
        let hol: Vec<Scalar> = (0..d)
            .map(|a| Ok(holonomy_along(&c, a)?.value))
            .collect::<Result<_>>()?;
        out_samples.push(FlatSample {
            label,
            holonomy: hol,
            realization: if by_jumps {
                "transitions".into()
            } else {
                "potential".into()
            },
        });
        cocycles.push(c);
    }
    let holonomy_gauge_invariant = out_samples
        .iter()
        .all(|s| s.label.iter().zip(&s.holonomy).all(|(a, b)| same_mod_z(a, b)));
    let index_pairs: Vec<(usize, usize)> = (0..samples)
        .flat_map(|i| (i + 1..samples).map(move |j| (i, j)))
        .collect();
    let pairs: Vec<PairCheck> = {
        use rayon::prelude::*;
        index_pairs
            .par_iter()
            .map(|&(i, j)| {
                let outcome = gauge_reduce(&cocycles[i], &cocycles[j], band)?;
                let same = out_samples[i]
                    .holonomy
                    .iter()
                    .zip(&out_samples[j].holonomy)
                    .all(|(a, b)| same_mod_z(a, b));
                let obstruction = match &outcome {
                    GaugeOutcome::NoWitness { obstruction } => obstruction.clone(),
                    GaugeOutcome::Witness(_) => None,
                };
                Ok(PairCheck {
                    i,
                    j,
                    gauge_equivalent: outcome.is_equivalent(),
                    same_holonomy: same,
                    obstruction,
                })
            })
            .collect::<Result<_>>()?
    };
    let mut class_of: Vec<usize> = (0..samples).collect();
    for p in &pairs {
        if p.gauge_equivalent {
            let (a, b) = (class_of[p.i], class_of[p.j]);
            let keep = a.min(b);
            for c in class_of.iter_mut() {
                if *c == a || *c == b {
                    *c = keep;
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, c) in class_of.iter().enumerate() {
        classes.entry(*c).or_default().push(i);
    }
    let classes: Vec<Vec<usize>> = classes.into_values().collect();
    let class_labels = classes.iter().map(|c| out_samples[c[0]].holonomy.clone()).collect();
    let classification_matches_holonomy = pairs.iter().all(|p| p.gauge_equivalent == p.same_holonomy);
    let (automorphism_dimension, automorphisms_are_constants) = automorphisms(nerve, band)?;
    Ok(FlatModuliReport {
        nerve_dim: d,
        level,
        seed,
        band,
        samples: out_samples,
        pairs,
        classes,
        class_labels,
        classification_matches_holonomy,
        holonomy_gauge_invariant,
        automorphism_dimension,
        automorphisms_are_constants,
    })
}

/// Degree-1 parameters with vanishing integer part and `D b = 0`: the
/// automorphisms of any flat connection, modulo integers.
pub fn automorphisms(nerve: &NerveRef, band: GaugeBand) -> Result<(usize, bool)> {
    let mut unknowns = Vec::new();
    for (i, s) in nerve.simplices(0).iter().enumerate() {
        for m in monomials(&s.chart, band) {
            unknowns.push(Unknown::Form(0, i, 0, m));
        }
    }
    let images: Vec<BTreeMap<Row, Scalar>> = unknowns
        .iter()
        .map(|u| Ok(rows_of(&elementary(nerve, 1, 1, u)?.total_differential()?)))
        .collect::<Result<_>>()?;
    let mut keys: BTreeMap<Row, usize> = BTreeMap::new();
    for r in images.iter().flat_map(BTreeMap::keys) {
        let next = keys.len();
        keys.entry(r.clone()).or_insert(next);
    }
    let mut a = SparseMatrix::new(keys.len(), unknowns.len());
    for (j, img) in images.iter().enumerate() {
        for (r, s) in img {
            a.add(keys[r], j, s);
        }
    }
    let kernel = a.nullspace();
    let constants = kernel.iter().all(|v| {
        let vals: Vec<&Scalar> = v.values().collect();
        let only_constants = v
            .keys()
            .all(|&j| matches!(&unknowns[j], Unknown::Form(_, _, _, m) if m == &Mono::one(nerve.dim())));
        only_constants && v.len() == nerve.count(0) && vals.windows(2).all(|w| w[0] == w[1])
    });
    Ok((kernel.len(), constants))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::nerve::Nerve;

    #[test]
    fn self_and_shifted() {
        let s1 = Nerve::circle();
        let c = flat_connection(&s1, &[Scalar::ratio(1, 3)], &BTreeMap::new()).unwrap();
        let GaugeOutcome::Witness(b) = gauge_reduce(&c, &c, GaugeBand::default()).unwrap() else {
            panic!()
        };
        assert!(b.is_zero());
        // same holonomy, realized by a transition jump on the (0,1) edge
        let jumps = [(0usize, Scalar::ratio(1, 3))].into_iter().collect();
        let c2 = flat_connection(&s1, &[Scalar::zero()], &jumps).unwrap();
        let GaugeOutcome::Witness(b) = gauge_reduce(&c, &c2, GaugeBand::default()).unwrap() else {
            panic!()
        };
        assert_eq!(
            b.total_differential().unwrap(),
            c.normalized().checked_sub(&c2.normalized()).unwrap()
        );
        let c3 = flat_connection(&s1, &[Scalar::ratio(1, 4)], &BTreeMap::new()).unwrap();
        match gauge_reduce(&c, &c3, GaugeBand::default()).unwrap() {
            GaugeOutcome::NoWitness { obstruction } => assert!(obstruction.unwrap().contains("holonomy")),
            GaugeOutcome::Witness(_) => panic!("1/3 and 1/4 are not gauge equivalent"),
        }
    }

    #[test]
    fn integer_shifts_are_gauge() {
        let s1 = Nerve::circle();
        let c = flat_connection(&s1, &[Scalar::ratio(1, 3)], &BTreeMap::new()).unwrap();
        let c2 = flat_connection(&s1, &[Scalar::ratio(4, 3)], &BTreeMap::new()).unwrap();
        assert!(gauge_reduce(&c, &c2, GaugeBand::default()).unwrap().is_equivalent());
    }

    #[test]
    fn circle_moduli() {
        let r = flat_moduli(&Nerve::circle(), 1, GaugeBand::default(), 8, 7).unwrap();
        assert!(r.classification_matches_holonomy, "{:?}", r.pairs);
        assert!(r.holonomy_gauge_invariant);
        assert_eq!(r.automorphism_dimension, 1);
        assert!(r.automorphisms_are_constants);
    }
}

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::form::{basis_indices, Basis};
use crate::exterior::{ChartRef, CoefFn, Form};
use crate::linalg::SparseMatrix;
use crate::linfinity::ChainComplex;

/// The band-limited complex `Ω⁰ → ⋯ → Ω^{n−2} → Ω^{n−1}_cl` on a torus.
/// The closed forms are presented as the kernel of `d: Ω^{n−1} → Ω^n`, so
/// the underlying matrix complex runs up to `Ω^n` and only the first `n`
/// homology groups are reported.
#[derive(Clone, Debug, Serialize)]
pub struct KernelComplex {
    pub band: i64,
    /// De Rham degree `p` of each space; the L∞ degree is `n − 1 − p`.
    pub form_degrees: Vec<usize>,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub betti: Vec<usize>,
}

fn waves(d: usize, k: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|w| (-k..=k).map(move |j| [w.clone(), vec![j]].concat()))
            .collect();
    }
    out
}

fn masks(d: usize, p: usize) -> Vec<Basis> {
    (0..1u32 << d).filter(|m| m.count_ones() as usize == p).collect()
}

/// Only the chart and `n` enter, so `n + 1` may exceed the dimension here.
pub fn kernel_complex(chart: &ChartRef, n: usize, band: i64) -> Result<KernelComplex> {
    let chart = chart.clone();
    let d = chart.dim();
    if n == 0 {
        return Err(Error::DegreeMismatch("n must be at least 1".into()));
    }
    if let Some(j) = (0..d).find(|&j| !chart.is_periodic(j)) {
        return Err(Error::NonPeriodicAxis(j));
    }
    if band < 0 {
        return Err(Error::InvalidOverride(format!("band {band} must be non-negative")));
    }
    let ws = waves(d, band);
    let bases: Vec<Vec<(Vec<i64>, Basis)>> = (0..=n)
        .map(|q| {
            ws.iter()
                .flat_map(|w| masks(d, q).into_iter().map(move |m| (w.clone(), m)))
                .collect()
        })
        .collect();
    let mut diffs = Vec::with_capacity(n);
    for q in 0..n {
        let pos: BTreeMap<&(Vec<i64>, Basis), usize> = bases[q + 1].iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut m = SparseMatrix::new(bases[q + 1].len(), bases[q].len());
        for (c, (w, mask)) in bases[q].iter().enumerate() {
            let e = Form::from_terms(chart.clone(), q, vec![(basis_indices(*mask), CoefFn::fourier(w))])?;
            for (b, f) in e.d().terms() {
                for (mono, s) in f.terms() {
                    m.add(pos[&(mono.wave.clone(), *b)], c, s);
                }
            }
        }
        diffs.push(m);
    }
    let complex = ChainComplex::new(bases.iter().map(Vec::len).collect(), diffs)?;
    let h = complex.homology();
    let top = h.ranks[n - 1];
    let mut dims = h.dims[..n].to_vec();
    dims[n - 1] -= top;
    Ok(KernelComplex {
        band,
        form_degrees: (0..n).collect(),
        dims,
        ranks: h.ranks[..n - 1].to_vec(),
        betti: h.betti[..n].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Chart;

    #[test]
    fn torus_betti_numbers() {
        let k = kernel_complex(&Chart::torus(2), 1, 2).unwrap();
        assert_eq!((k.dims, k.betti), (vec![1], vec![1]));
        assert_eq!(kernel_complex(&Chart::torus(2), 2, 2).unwrap().betti, vec![1, 2]);
        assert_eq!(kernel_complex(&Chart::torus(3), 2, 1).unwrap().betti, vec![1, 3]);
        assert_eq!(kernel_complex(&Chart::torus(3), 3, 1).unwrap().betti, vec![1, 3, 3]);
    }

    #[test]
    fn rejects_lines() {
        assert!(matches!(
            kernel_complex(&Chart::euclidean(2), 1, 1),
            Err(Error::NonPeriodicAxis(0))
        ));
    }
}

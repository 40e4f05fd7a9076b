//! L∞-morphism relations, checked after passing to the shifted symmetric
//! picture: `m_k(sx_1,…,sx_k) = (−1)^{Σ_i (k−i)|x_i|} s l_k(x_1,…,x_k)`, and
//! likewise for the components `f_k` (degree `k − 1` before the shift, `0`
//! after it).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::combinatorics::{block_unshuffles, compositions, factorial, koszul_sign, multisets, unshuffles};
use super::data::{normalize_tuple, LInfinityData};
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::scalar::Scalar;

/// Components `f_k` of a candidate morphism, keyed by source generator
/// tuples (graded antisymmetric, stored on non-decreasing tuples).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MorphismComponents {
    table: BTreeMap<Vec<usize>, SparseVec>,
}

impl MorphismComponents {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `f_k(inputs) = output`, checking `deg = Σ deg(inputs) + k − 1`.
    pub fn set(&mut self, src: &LInfinityData, dst: &LInfinityData, inputs: &[usize], output: SparseVec) -> Result<()> {
        let k = inputs.len();
        if k == 0 {
            return Err(Error::Arity("morphism components start at arity 1".into()));
        }
        let want = inputs.iter().map(|&i| src.degree_of(i)).sum::<i64>() + k as i64 - 1;
        if let Some((o, _)) = output.iter().find(|(o, c)| !c.is_zero() && dst.degree_of(**o) != want) {
            return Err(Error::DegreeMismatch(format!(
                "f_{k} on {inputs:?} must land in degree {want}, got generator {o}"
            )));
        }
        let degrees: Vec<i64> = src.generators().iter().map(|g| g.degree).collect();
        let (sorted, sign) = normalize_tuple(&degrees, inputs, true);
        if sign == 0 {
            return Ok(());
        }
        let out: SparseVec = output
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.scale_int(sign)))
            .collect();
        if out.is_empty() {
            self.table.remove(&sorted);
        } else {
            self.table.insert(sorted, out);
        }
        Ok(())
    }

    /// The strict map sending generator `i` to `images[i]`.
    pub fn linear(src: &LInfinityData, dst: &LInfinityData, images: &[SparseVec]) -> Result<Self> {
        let mut f = MorphismComponents::new();
        for (i, v) in images.iter().enumerate() {
            f.set(src, dst, &[i], v.clone())?;
        }
        Ok(f)
    }

    pub fn identity(l: &LInfinityData) -> Self {
        let images: Vec<SparseVec> = (0..l.dim())
            .map(|i| std::iter::once((i, Scalar::one())).collect())
            .collect();
        MorphismComponents::linear(l, l, &images).expect("identity has degree 0")
    }

    fn get(&self, degrees: &[i64], tuple: &[usize]) -> SparseVec {
        let (sorted, sign) = normalize_tuple(degrees, tuple, true);
        if sign == 0 {
            return SparseVec::new();
        }
        match self.table.get(&sorted) {
            Some(v) => v.iter().map(|(i, c)| (*i, c.scale_int(sign))).collect(),
            None => SparseVec::new(),
        }
    }

    fn max_arity(&self) -> usize {
        self.table.keys().map(Vec::len).max().unwrap_or(0)
    }
}

fn decalage_sign(degrees: &[i64], tuple: &[usize]) -> i64 {
    let k = tuple.len();
    let e: i64 = tuple
        .iter()
        .enumerate()
        .map(|(i, &x)| (k - 1 - i) as i64 * degrees[x])
        .sum();
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn add_scaled(acc: &mut SparseVec, v: &SparseVec, s: &Scalar) {
    for (i, c) in v {
        let e = acc.entry(*i).or_default();
        *e += &(c * s);
        if e.is_zero() {
            acc.remove(i);
        }
    }
}

/// Expands a multilinear map over vector arguments.
fn multilinear(args: &[SparseVec], basis_map: &dyn Fn(&[usize]) -> SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    if args.iter().any(BTreeMap::is_empty) {
        return out;
    }
    let lists: Vec<Vec<(&usize, &Scalar)>> = args.iter().map(|a| a.iter().collect()).collect();
    let mut idx = vec![0usize; args.len()];
    loop {
        let tuple: Vec<usize> = idx.iter().enumerate().map(|(p, &i)| *lists[p][i].0).collect();
        let v = basis_map(&tuple);
        if !v.is_empty() {
            let c = idx
                .iter()
                .enumerate()
                .fold(Scalar::one(), |acc, (p, &i)| &acc * lists[p][i].1);
            add_scaled(&mut out, &v, &c);
        }
        let mut p = 0;
        loop {
            if p == args.len() {
                return out;
            }
            idx[p] += 1;
            if idx[p] < lists[p].len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

struct Shifted<'a> {
    l: &'a LInfinityData,
    degrees: Vec<i64>,
    shifted: Vec<i64>,
}

impl<'a> Shifted<'a> {
    fn new(l: &'a LInfinityData) -> Self {
        let degrees: Vec<i64> = l.generators().iter().map(|g| g.degree).collect();
        let shifted = degrees.iter().map(|d| d + 1).collect();
        Shifted { l, degrees, shifted }
    }

    fn m_basis(&self, tuple: &[usize]) -> SparseVec {
        let v = self.l.bracket_basis(tuple);
        if decalage_sign(&self.degrees, tuple) < 0 {
            v.into_iter().map(|(i, c)| (i, -c)).collect()
        } else {
            v
        }
    }

    fn m(&self, args: &[SparseVec]) -> SparseVec {
        if args.len() > self.l.max_arity() {
            return SparseVec::new();
        }
        multilinear(args, &|t| self.m_basis(t))
    }
}

fn unit(i: usize) -> SparseVec {
    std::iter::once((i, Scalar::one())).collect()
}

/// `Σ_{i+j=n+1} Σ_{σ∈Sh(i,n−i)} ε(σ) m_j(m_i(sx_σ(1),…), sx_σ(i+1),…)` on a
/// basis tuple: the relation `Q² = 0` of the shifted picture.
pub fn symmetric_jacobi_residual(l: &LInfinityData, tuple: &[usize]) -> SparseVec {
    let sh = Shifted::new(l);
    let n = tuple.len();
    let local: Vec<i64> = tuple.iter().map(|&x| sh.shifted[x]).collect();
    let mut out = SparseVec::new();
    for i in 1..=n {
        for perm in unshuffles(n, i) {
            let eps = koszul_sign(&local, &perm, false);
            let inner = sh.m(&perm[..i].iter().map(|&p| unit(tuple[p])).collect::<Vec<_>>());
            if inner.is_empty() {
                continue;
            }
            let mut args = vec![inner];
            args.extend(perm[i..].iter().map(|&p| unit(tuple[p])));
            add_scaled(&mut out, &sh.m(&args), &Scalar::from_int(eps));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismEntry {
    pub arity: usize,
    pub tuple: Vec<String>,
    pub residual: BTreeMap<String, Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub max_arity: usize,
    pub checked: usize,
    pub all_zero: bool,
    pub failures: Vec<MorphismEntry>,
}

/// Checks the L∞-morphism relations up to `max_arity` on all non-decreasing
/// source generator tuples.
pub fn verify_morphism(
    f: &MorphismComponents,
    src: &LInfinityData,
    dst: &LInfinityData,
    max_arity: usize,
) -> Result<MorphismReport> {
    if max_arity > 5 {
        return Err(Error::Arity(format!("max arity {max_arity} above 5")));
    }
    if let Some(bad) = f
        .table
        .iter()
        .flat_map(|(t, v)| {
            t.iter()
                .map(|&i| (i, src.dim()))
                .chain(v.keys().map(|&o| (o, dst.dim())))
        })
        .find(|(i, n)| i >= n)
    {
        return Err(Error::DegreeMismatch(format!("generator index {} out of range", bad.0)));
    }
    let s = Shifted::new(src);
    let d = Shifted::new(dst);
    let fmax = f.max_arity();
    let f_sym = |tuple: &[usize]| -> SparseVec {
        if tuple.len() > fmax {
            return SparseVec::new();
        }
        let v = f.get(&s.degrees, tuple);
        if decalage_sign(&s.degrees, tuple) < 0 {
            v.into_iter().map(|(i, c)| (i, -c)).collect()
        } else {
            v
        }
    };
    let tuples: Vec<Vec<usize>> = (1..=max_arity).flat_map(|k| multisets(src.dim(), k)).collect();
    let results: Vec<(Vec<usize>, SparseVec)> = tuples
        .par_iter()
        .map(|tuple| {
            let n = tuple.len();
            let local: Vec<i64> = tuple.iter().map(|&x| s.shifted[x]).collect();
            let mut lhs = SparseVec::new();
            for i in 1..=n {
                for perm in unshuffles(n, i) {
                    let eps = koszul_sign(&local, &perm, false);
                    let inner = s.m(&perm[..i].iter().map(|&p| unit(tuple[p])).collect::<Vec<_>>());
                    if inner.is_empty() {
                        continue;
                    }
                    let mut args = vec![inner];
                    args.extend(perm[i..].iter().map(|&p| unit(tuple[p])));
                    add_scaled(&mut lhs, &multilinear(&args, &f_sym), &Scalar::from_int(eps));
                }
            }
            let mut rhs = SparseVec::new();
            for comp in compositions(n) {
                let t = comp.len();
                if t > dst.max_arity() {
                    continue;
                }
                let weight = Scalar::ratio(1, factorial(t));
                for perm in block_unshuffles(&comp) {
                    let eps = koszul_sign(&local, &perm, false);
                    let mut start = 0;
                    let mut images = Vec::with_capacity(t);
                    for &k in &comp {
                        let block: Vec<usize> = perm[start..start + k].iter().map(|&p| tuple[p]).collect();
                        images.push(f_sym(&block));
                        start += k;
                    }
                    let v = d.m(&images);
                    add_scaled(&mut rhs, &v, &weight.scale_int(eps));
                }
            }
            add_scaled(&mut lhs, &rhs, &Scalar::from_int(-1));
            (tuple.clone(), lhs)
        })
        .collect();
    let checked = results.len();
    let failures: Vec<MorphismEntry> = results
        .into_iter()
        .filter(|(_, r)| !r.is_empty())
        .map(|(t, r)| MorphismEntry {
            arity: t.len(),
            tuple: t.iter().map(|&i| src.generators()[i].name.clone()).collect(),
            residual: r
                .into_iter()
                .map(|(i, c)| (dst.generators()[i].name.clone(), c))
                .collect(),
        })
        .collect();
    Ok(MorphismReport {
        max_arity,
        checked,
        all_zero: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conventions::JacobiConvention;
    use crate::linfinity::cocycle::{coboundary_cochain, string_extension, LieCocycle};
    use crate::linfinity::data::{su2, verify_l_infinity, Generator};

    fn sv(pairs: &[(usize, i64)]) -> SparseVec {
        pairs.iter().map(|&(i, c)| (i, Scalar::from_int(c))).collect()
    }

    /// The shifted relation and the shuffle-convention Jacobi identity agree.
    fn agrees(l: &LInfinityData, max: usize) {
        let shuffle_ok = verify_l_infinity(l, max, JacobiConvention::Shuffle).unwrap().all_zero;
        let sym_ok = (1..=max)
            .flat_map(|k| multisets(l.dim(), k))
            .all(|t| symmetric_jacobi_residual(l, &t).is_empty());
        assert_eq!(shuffle_ok, sym_ok);
    }

    fn inner_derivations() -> LInfinityData {
        // su(2) ⋉ su(2)[1] with l_1(s e_i) = e_i
        let names = ["e1", "e2", "e3", "s1", "s2", "s3"];
        let gens = names
            .iter()
            .enumerate()
            .map(|(i, n)| Generator {
                name: n.to_string(),
                degree: i64::from(i >= 3),
            })
            .collect();
        let mut l = LInfinityData::new(gens, 2).unwrap();
        for i in 0..3 {
            l.set_bracket(&[i + 3], sv(&[(i, 1)])).unwrap();
        }
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            l.set_bracket(&[a, b], sv(&[(c, 1)])).unwrap();
            l.set_bracket(&[a, b + 3], sv(&[(c + 3, 1)])).unwrap();
            l.set_bracket(&[b, a + 3], sv(&[(c + 3, -1)])).unwrap();
        }
        l
    }

    #[test]
    fn decalage_matches_shuffle_jacobi() {
        let g = su2();
        let s = string_extension(&g, &LieCocycle::killing_three_form(&g)).unwrap();
        agrees(&s, 4);
        let inn = inner_derivations();
        assert!(verify_l_infinity(&inn, 3, JacobiConvention::Shuffle).unwrap().all_zero);
        agrees(&inn, 3);
        let broken = inn.with_entry(&[3], sv(&[(0, -1)])).unwrap();
        assert!(
            !verify_l_infinity(&broken, 3, JacobiConvention::Shuffle)
                .unwrap()
                .all_zero
        );
        agrees(&broken, 3);
    }

    #[test]
    fn strict_maps() {
        let g = su2();
        assert!(
            verify_morphism(&MorphismComponents::identity(&g), &g, &g, 3)
                .unwrap()
                .all_zero
        );
        let s = string_extension(&g, &LieCocycle::killing_three_form(&g)).unwrap();
        let proj = MorphismComponents::linear(&s, &g, &[sv(&[(0, 1)]), sv(&[(1, 1)]), sv(&[(2, 1)]), sv(&[])]).unwrap();
        assert!(verify_morphism(&proj, &s, &g, 4).unwrap().all_zero);
        let scale = MorphismComponents::linear(&g, &g, &[sv(&[(0, 2)]), sv(&[(1, 1)]), sv(&[(2, 1)])]).unwrap();
        let r = verify_morphism(&scale, &g, &g, 3).unwrap();
        assert!(!r.all_zero);
        assert!(r.failures.iter().any(|e| e.arity == 2));
    }

    #[test]
    fn binary_component_absorbs_a_coboundary() {
        // r3: [e1,e2] = e2, [e1,e3] = e3; β = e2*∧e3*, dβ(e1,e2,e3) = −2
        let g = LInfinityData::lie(
            &["e1", "e2", "e3"],
            &[(0, 1, vec![(1, Scalar::one())]), (0, 2, vec![(2, Scalar::one())])],
        )
        .unwrap();
        let mut beta = LieCocycle::zero(3, 2);
        beta.set(&[1, 2], Scalar::one()).unwrap();
        let dbeta = coboundary_cochain(&g, &beta).unwrap();
        assert_eq!(dbeta.eval(&[0, 1, 2]), Scalar::from_int(-2));
        let trivial = string_extension(&g, &LieCocycle::zero(3, 3)).unwrap();
        let mut passes = Vec::new();
        for sign in [1, -1] {
            let dst = string_extension(&g, &dbeta.scale(&Scalar::from_int(sign))).unwrap();
            let mut f = MorphismComponents::identity(&trivial);
            for t in [[0usize, 1], [0, 2], [1, 2]] {
                f.set(&trivial, &dst, &t, [(3, beta.eval(&t))].into_iter().collect())
                    .unwrap();
            }
            passes.push(verify_morphism(&f, &trivial, &dst, 4).unwrap().all_zero);
        }
        assert_eq!(passes.iter().filter(|&&p| p).count(), 1);
    }
}

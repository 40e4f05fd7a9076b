use std::collections::BTreeMap;

use super::combinatorics::subsets;
use super::data::{normalize_tuple, Generator, LInfinityData};
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::scalar::Scalar;

/// A fully skew `m`-linear form on a Lie algebra, by structure constants on
/// strictly increasing tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieCocycle {
    dim: usize,
    degree: usize,
    values: BTreeMap<Vec<usize>, Scalar>,
}

impl LieCocycle {
    pub fn zero(dim: usize, degree: usize) -> Self {
        LieCocycle {
            dim,
            degree,
            values: BTreeMap::new(),
        }
    }

    /// Fills every strictly increasing tuple from `f`.
    pub fn from_fn(dim: usize, degree: usize, f: impl Fn(&[usize]) -> Scalar) -> Self {
        let mut c = LieCocycle::zero(dim, degree);
        for t in subsets(dim, degree) {
            let v = f(&t);
            if !v.is_zero() {
                c.values.insert(t, v);
            }
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &BTreeMap<Vec<usize>, Scalar> {
        &self.values
    }

    pub fn set(&mut self, tuple: &[usize], v: Scalar) -> Result<()> {
        if tuple.len() != self.degree || tuple.iter().any(|&i| i >= self.dim) {
            return Err(Error::DegreeMismatch(format!(
                "tuple {tuple:?} for a degree-{} cochain",
                self.degree
            )));
        }
        let (sorted, sign) = normalize_tuple(&vec![0; self.dim], tuple, true);
        if sign == 0 {
            return if v.is_zero() {
                Ok(())
            } else {
                Err(Error::InvalidAlgebra(
                    "a skew form vanishes on repeated arguments".into(),
                ))
            };
        }
        if v.is_zero() {
            self.values.remove(&sorted);
        } else {
            self.values.insert(sorted, v.scale_int(sign));
        }
        Ok(())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        LieCocycle::from_fn(self.dim, self.degree, |t| &self.eval(t) * s)
    }

    /// Value on a basis tuple in any order.
    pub fn eval(&self, tuple: &[usize]) -> Scalar {
        let (sorted, sign) = normalize_tuple(&vec![0; self.dim], tuple, true);
        if sign == 0 {
            return Scalar::zero();
        }
        self.values.get(&sorted).map(|v| v.scale_int(sign)).unwrap_or_default()
    }

    /// Value with a vector in the first slot.
    fn eval_first(&self, v: &SparseVec, rest: &[usize]) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, c) in v {
            let mut t = vec![*i];
            t.extend_from_slice(rest);
            acc += &(c * &self.eval(&t));
        }
        acc
    }

    /// `⟨x, [y, z]⟩` for the identity inner product on the basis.
    pub fn killing_three_form(g: &LInfinityData) -> Self {
        LieCocycle::from_fn(g.dim(), 3, |t| {
            g.bracket_basis(&[t[1], t[2]]).get(&t[0]).cloned().unwrap_or_default()
        })
    }
}

fn ensure_lie(g: &LInfinityData, mu: &LieCocycle) -> Result<()> {
    if !g.is_lie() {
        return Err(Error::DegreeMismatch(
            "cocycles are defined here for ordinary Lie algebras".into(),
        ));
    }
    if mu.dim() != g.dim() {
        return Err(Error::DegreeMismatch(format!(
            "cochain on {} generators, algebra has {}",
            mu.dim(),
            g.dim()
        )));
    }
    Ok(())
}

/// Chevalley–Eilenberg coboundary with trivial coefficients,
/// `(dμ)(x_0,…,x_m) = Σ_{i<j} (−1)^{i+j} μ([x_i,x_j], x_0,…,x̂_i,…,x̂_j,…,x_m)`,
/// on every strictly increasing tuple. Returns the nonzero entries.
pub fn coboundary(g: &LInfinityData, mu: &LieCocycle) -> Result<BTreeMap<Vec<usize>, Scalar>> {
    ensure_lie(g, mu)?;
    let m = mu.degree();
    let mut out = BTreeMap::new();
    for t in subsets(g.dim(), m + 1) {
        let mut acc = Scalar::zero();
        for i in 0..=m {
            for j in i + 1..=m {
                let br = g.bracket_basis(&[t[i], t[j]]);
                if br.is_empty() {
                    continue;
                }
                let rest: Vec<usize> = (0..=m).filter(|&p| p != i && p != j).map(|p| t[p]).collect();
                let v = mu.eval_first(&br, &rest);
                acc += &if (i + j) % 2 == 0 { v } else { -v };
            }
        }
        if !acc.is_zero() {
            out.insert(t, acc);
        }
    }
    Ok(out)
}

/// `(dμ = 0, nonzero entries of dμ)`.
pub fn is_cocycle(g: &LInfinityData, mu: &LieCocycle) -> Result<(bool, BTreeMap<Vec<usize>, Scalar>)> {
    let r = coboundary(g, mu)?;
    Ok((r.is_empty(), r))
}

/// The coboundary `dβ` as a cochain.
pub fn coboundary_cochain(g: &LInfinityData, beta: &LieCocycle) -> Result<LieCocycle> {
    let vals = coboundary(g, beta)?;
    Ok(LieCocycle::from_fn(g.dim(), beta.degree() + 1, |t| {
        vals.get(t).cloned().unwrap_or_default()
    }))
}

/// The extension of `g` by a line `c` in degree `m − 2` classified by the
/// degree-`m` cocycle `μ`: `l_2` is the bracket of `g` (zero on `c`) and
/// `l_m(x_1,…,x_m)` gains the component `μ(x_1,…,x_m)·c`.
pub fn string_extension(g: &LInfinityData, mu: &LieCocycle) -> Result<LInfinityData> {
    let (ok, residual) = is_cocycle(g, mu)?;
    if !ok {
        let (t, v) = residual.iter().next().expect("nonzero residual");
        return Err(Error::NotACocycle(format!("dμ{t:?} = {v}")));
    }
    let m = mu.degree();
    let mut name = "c".to_string();
    while g.generators().iter().any(|x| x.name == name) {
        name.push('\'');
    }
    let mut gens = g.generators().to_vec();
    gens.push(Generator {
        name,
        degree: m as i64 - 2,
    });
    let c = gens.len() - 1;
    let mut ext = LInfinityData::new(gens, m.max(2))?;
    for (t, v) in g.table() {
        ext.set_bracket(t, v.clone())?;
    }
    for (t, v) in mu.values() {
        let mut out = ext.bracket_basis(t);
        let e = out.entry(c).or_default();
        *e += v;
        ext.set_bracket(t, out)?;
    }
    Ok(ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conventions::JacobiConvention;
    use crate::linfinity::data::{abelian, su2, verify_l_infinity};

    #[test]
    fn killing_form_is_a_cocycle() {
        let g = su2();
        let mu = LieCocycle::killing_three_form(&g);
        assert_eq!(mu.eval(&[0, 1, 2]), Scalar::one());
        assert_eq!(mu.eval(&[1, 0, 2]), Scalar::from_int(-1));
        assert!(is_cocycle(&g, &mu).unwrap().0);
    }

    #[test]
    fn degree_two_cochains() {
        let g = su2();
        // every 2-cochain on su(2) is a coboundary, hence closed
        let mut mu = LieCocycle::zero(3, 2);
        mu.set(&[0, 1], Scalar::one()).unwrap();
        assert!(is_cocycle(&g, &mu).unwrap().0);
        let mut nu = LieCocycle::zero(3, 1);
        nu.set(&[0], Scalar::one()).unwrap();
        let (ok, res) = is_cocycle(&g, &nu).unwrap();
        assert!(!ok);
        assert_eq!(res[&vec![1, 2]], Scalar::from_int(-1));
        let ab = abelian(&["a", "b"]);
        let mut s = LieCocycle::zero(2, 2);
        s.set(&[1, 0], Scalar::from_int(7)).unwrap();
        assert!(is_cocycle(&ab, &s).unwrap().0);
    }

    #[test]
    fn heisenberg() {
        let ab = abelian(&["e1", "e2"]);
        let mut mu = LieCocycle::zero(2, 2);
        mu.set(&[0, 1], Scalar::one()).unwrap();
        let h = string_extension(&ab, &mu).unwrap();
        assert_eq!(h.bracket_basis(&[0, 1]), [(2, Scalar::one())].into_iter().collect());
        assert_eq!(h.degree_of(2), 0);
        assert!(verify_l_infinity(&h, 3, JacobiConvention::Shuffle).unwrap().all_zero);
    }

    #[test]
    fn string_lie_two_algebra() {
        let g = su2();
        let s = string_extension(&g, &LieCocycle::killing_three_form(&g)).unwrap();
        assert_eq!(s.degree_of(3), 1);
        assert_eq!(s.bracket_basis(&[0, 1, 2]), [(3, Scalar::one())].into_iter().collect());
        assert!(verify_l_infinity(&s, 4, JacobiConvention::Shuffle).unwrap().all_zero);
        let zero = string_extension(&g, &LieCocycle::zero(3, 3)).unwrap();
        assert!(zero.table().keys().all(|t| t.len() == 2));
    }
}

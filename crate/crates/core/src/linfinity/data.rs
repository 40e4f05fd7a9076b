use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::combinatorics::koszul_sign;
use super::jacobi::{jacobi_report, BracketAlgebra, JacobiReport};
use crate::conventions::JacobiConvention;
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::scalar::Scalar;

/// Sorts a generator tuple and returns the Koszul sign of the reordering
/// (antisymmetric or symmetric in the given degrees), or 0 when the tuple
/// repeats a generator on which such a map must vanish.
pub fn normalize_tuple(degrees: &[i64], tuple: &[usize], antisymmetric: bool) -> (Vec<usize>, i64) {
    let local: Vec<i64> = tuple.iter().map(|&i| degrees[i]).collect();
    let mut perm: Vec<usize> = (0..tuple.len()).collect();
    perm.sort_by_key(|&p| (tuple[p], p));
    let sorted: Vec<usize> = perm.iter().map(|&p| tuple[p]).collect();
    let vanishing_parity = if antisymmetric { 0 } else { 1 };
    if sorted
        .windows(2)
        .any(|w| w[0] == w[1] && degrees[w[0]].rem_euclid(2) == vanishing_parity)
    {
        return (sorted, 0);
    }
    (sorted, koszul_sign(&local, &perm, antisymmetric))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// A homogeneous element `Σ c_i g_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LElem {
    pub degree: i64,
    pub coeffs: SparseVec,
}

impl LElem {
    pub fn zero(degree: i64) -> Self {
        LElem {
            degree,
            coeffs: SparseVec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_scaled(&mut self, v: &SparseVec, s: &Scalar) {
        for (i, c) in v {
            let e = self.coeffs.entry(*i).or_default();
            *e += &(c * s);
            if e.is_zero() {
                self.coeffs.remove(i);
            }
        }
    }
}

impl fmt::Display for LElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(i, c)| format!("({c})*g{i}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A finite-dimensional L∞-algebra given by structure constants.
///
/// `l_k` is stored on non-decreasing generator tuples; any other ordering is
/// recovered with the antisymmetric Koszul sign. A tuple repeating an
/// even generator has vanishing bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LInfinityData {
    gens: Vec<Generator>,
    max_arity: usize,
    table: BTreeMap<Vec<usize>, SparseVec>,
}

impl LInfinityData {
    pub fn new(gens: Vec<Generator>, max_arity: usize) -> Result<Self> {
        let names: BTreeSet<&str> = gens.iter().map(|g| g.name.as_str()).collect();
        if names.len() != gens.len() {
            return Err(Error::InvalidAlgebra("generator names must be unique".into()));
        }
        if max_arity == 0 {
            return Err(Error::InvalidAlgebra("max arity must be at least 1".into()));
        }
        Ok(LInfinityData {
            gens,
            max_arity,
            table: BTreeMap::new(),
        })
    }

    /// A Lie algebra from `[e_a, e_b] = Σ c e_c` entries.
    pub fn lie(names: &[&str], brackets: &[(usize, usize, Vec<(usize, Scalar)>)]) -> Result<Self> {
        let gens = names
            .iter()
            .map(|n| Generator {
                name: n.to_string(),
                degree: 0,
            })
            .collect();
        let mut l = LInfinityData::new(gens, 2)?;
        for (a, b, out) in brackets {
            l.set_bracket(&[*a, *b], out.iter().cloned().collect())?;
        }
        Ok(l)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn degree_of(&self, i: usize) -> i64 {
        self.gens[i].degree
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::InvalidAlgebra(format!("unknown generator `{name}`")))
    }

    pub fn table(&self) -> &BTreeMap<Vec<usize>, SparseVec> {
        &self.table
    }

    fn normalize(&self, tuple: &[usize]) -> (Vec<usize>, i64) {
        let degrees: Vec<i64> = self.gens.iter().map(|g| g.degree).collect();
        normalize_tuple(&degrees, tuple, true)
    }

    /// Sets `l_k(inputs) = output`, storing the normalized entry.
    pub fn set_bracket(&mut self, inputs: &[usize], output: SparseVec) -> Result<()> {
        let k = inputs.len();
        if k == 0 || k > self.max_arity {
            return Err(Error::Arity(format!("arity {k} outside 1..={}", self.max_arity)));
        }
        if let Some(&bad) = inputs.iter().chain(output.keys()).find(|&&i| i >= self.dim()) {
            return Err(Error::InvalidAlgebra(format!("generator index {bad} out of range")));
        }
        let want: i64 = inputs.iter().map(|&i| self.gens[i].degree).sum::<i64>() + k as i64 - 2;
        if let Some((&o, _)) = output
            .iter()
            .find(|(&o, c)| !c.is_zero() && self.gens[o].degree != want)
        {
            return Err(Error::InvalidAlgebra(format!(
                "l_{k} on {inputs:?} must land in degree {want}, but `{}` has degree {}",
                self.gens[o].name, self.gens[o].degree
            )));
        }
        let output: SparseVec = output.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let (sorted, sign) = self.normalize(inputs);
        if sign == 0 {
            if output.is_empty() {
                return Ok(());
            }
            return Err(Error::InvalidAlgebra(format!(
                "l_{k} must vanish on {inputs:?} (repeated even generator)"
            )));
        }
        if output.is_empty() {
            self.table.remove(&sorted);
        } else {
            let s = Scalar::from_int(sign);
            self.table
                .insert(sorted, output.into_iter().map(|(i, c)| (i, &c * &s)).collect());
        }
        Ok(())
    }

    pub fn set_bracket_named(&mut self, inputs: &[&str], output: &[(&str, Scalar)]) -> Result<()> {
        let idx = inputs.iter().map(|n| self.index_of(n)).collect::<Result<Vec<_>>>()?;
        let out = output
            .iter()
            .map(|(n, c)| Ok((self.index_of(n)?, c.clone())))
            .collect::<Result<SparseVec>>()?;
        self.set_bracket(&idx, out)
    }

    /// `l_k` on a basis tuple in any order.
    pub fn bracket_basis(&self, tuple: &[usize]) -> SparseVec {
        let (sorted, sign) = self.normalize(tuple);
        if sign == 0 {
            return SparseVec::new();
        }
        match self.table.get(&sorted) {
            Some(v) if sign > 0 => v.clone(),
            Some(v) => v.iter().map(|(i, c)| (*i, -c.clone())).collect(),
            None => SparseVec::new(),
        }
    }

    pub fn basis(&self, i: usize) -> LElem {
        LElem {
            degree: self.gens[i].degree,
            coeffs: std::iter::once((i, Scalar::one())).collect(),
        }
    }

    pub fn basis_elements(&self) -> Vec<LElem> {
        (0..self.dim()).map(|i| self.basis(i)).collect()
    }

    /// Multilinear extension of `l_k`.
    pub fn bracket_elems(&self, args: &[LElem]) -> LElem {
        let k = args.len();
        let degree = args.iter().map(|a| a.degree).sum::<i64>() + k as i64 - 2;
        let mut out = LElem::zero(degree);
        if k == 0 || k > self.max_arity {
            return out;
        }
        let mut idx = vec![0usize; k];
        let lists: Vec<Vec<(&usize, &Scalar)>> = args.iter().map(|a| a.coeffs.iter().collect()).collect();
        if lists.iter().any(Vec::is_empty) {
            return out;
        }
        loop {
            let tuple: Vec<usize> = (0..k).map(|p| *lists[p][idx[p]].0).collect();
            let v = self.bracket_basis(&tuple);
            if !v.is_empty() {
                let coeff = (0..k).fold(Scalar::one(), |acc, p| &acc * lists[p][idx[p]].1);
                out.add_scaled(&v, &coeff);
            }
            let mut p = 0;
            loop {
                if p == k {
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

    /// Whether this is an ordinary Lie algebra (degree 0, only `l_2`).
    pub fn is_lie(&self) -> bool {
        self.gens.iter().all(|g| g.degree == 0) && self.table.keys().all(|t| t.len() == 2)
    }

    /// Same data with one entry replaced.
    pub fn with_entry(&self, inputs: &[usize], output: SparseVec) -> Result<Self> {
        let mut l = self.clone();
        l.set_bracket(inputs, output)?;
        Ok(l)
    }

    pub fn to_repr(&self) -> LInfinityRepr {
        LInfinityRepr {
            generators: self.gens.clone(),
            max_arity: self.max_arity,
            brackets: self
                .table
                .iter()
                .map(|(t, v)| BracketRepr {
                    inputs: t.iter().map(|&i| self.gens[i].name.clone()).collect(),
                    output: v.iter().map(|(i, c)| (self.gens[*i].name.clone(), c.clone())).collect(),
                })
                .collect(),
        }
    }

    pub fn from_repr(r: &LInfinityRepr) -> Result<Self> {
        let mut l = LInfinityData::new(r.generators.clone(), r.max_arity)?;
        for b in &r.brackets {
            let inputs: Vec<&str> = b.inputs.iter().map(String::as_str).collect();
            let out: Vec<(&str, Scalar)> = b.output.iter().map(|(n, c)| (n.as_str(), c.clone())).collect();
            l.set_bracket_named(&inputs, &out)?;
        }
        Ok(l)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_repr()).expect("L-infinity data serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let r: LInfinityRepr = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        LInfinityData::from_repr(&r)
    }
}

/// JSON descriptor: generators with degrees and a sparse bracket table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LInfinityRepr {
    pub generators: Vec<Generator>,
    pub max_arity: usize,
    pub brackets: Vec<BracketRepr>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketRepr {
    pub inputs: Vec<String>,
    pub output: BTreeMap<String, Scalar>,
}

impl BracketAlgebra for LInfinityData {
    type Elem = LElem;

    fn degree(&self, x: &LElem) -> i64 {
        x.degree
    }

    fn bracket(&self, args: &[LElem]) -> Result<LElem> {
        Ok(self.bracket_elems(args))
    }

    fn combine(&self, terms: Vec<(i64, LElem)>, degree: i64) -> Result<LElem> {
        let mut out = LElem::zero(degree);
        for (s, t) in terms {
            out.add_scaled(&t.coeffs, &Scalar::from_int(s));
        }
        Ok(out)
    }

    fn is_zero(&self, x: &LElem) -> bool {
        x.is_zero()
    }

    fn has_arity(&self, k: usize) -> bool {
        self.table.keys().any(|t| t.len() == k)
    }
}

/// Brute-force check of every generalized Jacobi identity up to `max_arity`
/// on basis tuples.
pub fn verify_l_infinity(l: &LInfinityData, max_arity: usize, conv: JacobiConvention) -> Result<JacobiReport> {
    if max_arity > 5 || max_arity > l.max_arity() + 2 {
        return Err(Error::Arity(format!(
            "max arity {max_arity} exceeds min(5, declared arity {} + 2)",
            l.max_arity()
        )));
    }
    jacobi_report(l, &l.basis_elements(), max_arity, conv)
}

/// su(2) with `[e_a, e_b] = ε_{abc} e_c`.
pub fn su2() -> LInfinityData {
    let one = Scalar::one;
    LInfinityData::lie(
        &["e1", "e2", "e3"],
        &[
            (0, 1, vec![(2, one())]),
            (1, 2, vec![(0, one())]),
            (2, 0, vec![(1, one())]),
        ],
    )
    .expect("su(2) structure constants")
}

/// The abelian Lie algebra on `names`.
pub fn abelian(names: &[&str]) -> LInfinityData {
    LInfinityData::lie(names, &[]).expect("abelian algebra")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skew_normalization_round_trips() {
        let l = su2();
        assert_eq!(
            l.bracket_basis(&[1, 0]),
            [(2, Scalar::from_int(-1))].into_iter().collect()
        );
        assert_eq!(
            l.bracket_basis(&[0, 2]),
            [(1, Scalar::from_int(-1))].into_iter().collect()
        );
        assert!(l.bracket_basis(&[0, 0]).is_empty());
    }

    #[test]
    fn degree_check_on_insert() {
        let gens = vec![
            Generator {
                name: "a".into(),
                degree: 0,
            },
            Generator {
                name: "c".into(),
                degree: 1,
            },
        ];
        let mut l = LInfinityData::new(gens, 3).unwrap();
        assert!(l
            .set_bracket(&[0, 0, 0], [(1, Scalar::one())].into_iter().collect())
            .is_err());
        assert!(l
            .set_bracket(&[0, 0], [(0, Scalar::one())].into_iter().collect())
            .is_err());
        assert!(l
            .set_bracket(&[1, 1], [(0, Scalar::one())].into_iter().collect())
            .is_err());
        assert!(l.set_bracket(&[1], [(0, Scalar::one())].into_iter().collect()).is_ok());
    }

    #[test]
    fn su2_is_lie_and_mutation_fails() {
        let l = su2();
        let r = verify_l_infinity(&l, 3, JacobiConvention::Shuffle).unwrap();
        assert!(r.all_zero);
        // flipping one sign gives sl(2, R), still a Lie algebra
        let flipped = l
            .with_entry(&[0, 1], [(2, Scalar::from_int(-1))].into_iter().collect())
            .unwrap();
        assert!(
            verify_l_infinity(&flipped, 3, JacobiConvention::Shuffle)
                .unwrap()
                .all_zero
        );
        let bad = l
            .with_entry(&[0, 1], [(2, Scalar::one()), (0, Scalar::one())].into_iter().collect())
            .unwrap();
        let r = verify_l_infinity(&bad, 3, JacobiConvention::Shuffle).unwrap();
        assert!(r.failures_at(3) > 0);
        let ab = abelian(&["x"]);
        assert!(verify_l_infinity(&ab, 3, JacobiConvention::Shuffle).unwrap().all_zero);
    }

    #[test]
    fn json_round_trip() {
        let l = su2();
        assert_eq!(LInfinityData::from_json(&l.to_json()).unwrap(), l);
    }
}

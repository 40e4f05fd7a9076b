//! Generalized Jacobi identities for any algebra with multibrackets.

use std::fmt::Display;

use rayon::prelude::*;
use serde::Serialize;

use super::combinatorics::{koszul_sign, multisets, unshuffles};
use crate::conventions::JacobiConvention;
use crate::error::Result;

/// Graded multibrackets `l_k`, with `l_k` of degree `k − 2`.
pub trait BracketAlgebra: Sync {
    type Elem: Clone + Send + Sync + Display;

    fn degree(&self, x: &Self::Elem) -> i64;

    /// `l_k(args)` for `k = args.len() ≥ 1`.
    fn bracket(&self, args: &[Self::Elem]) -> Result<Self::Elem>;

    /// `Σ sign · elem`, all of the given degree (the zero element when empty).
    fn combine(&self, terms: Vec<(i64, Self::Elem)>, degree: i64) -> Result<Self::Elem>;

    fn is_zero(&self, x: &Self::Elem) -> bool;

    /// Arities whose brackets vanish identically may be skipped.
    fn has_arity(&self, _k: usize) -> bool {
        true
    }
}

/// `J_k(x_1,…,x_k)`; zero for every tuple exactly when the brackets satisfy
/// the arity-`k` identity.
pub fn jacobi_residual<A: BracketAlgebra>(alg: &A, xs: &[A::Elem], conv: JacobiConvention) -> Result<A::Elem> {
    let k = xs.len();
    let degrees: Vec<i64> = xs.iter().map(|x| alg.degree(x)).collect();
    let total: i64 = degrees.iter().sum::<i64>() + k as i64 - 3;
    let mut terms = Vec::new();
    for i in 1..=k {
        let j = k + 1 - i;
        if !alg.has_arity(i) || !alg.has_arity(j) {
            continue;
        }
        for perm in unshuffles(k, i) {
            let sign = koszul_sign(&degrees, &perm, true) * conv.sign(i, j);
            let inner_args: Vec<A::Elem> = perm[..i].iter().map(|&p| xs[p].clone()).collect();
            let inner = alg.bracket(&inner_args)?;
            if alg.is_zero(&inner) {
                continue;
            }
            let mut outer_args = vec![inner];
            outer_args.extend(perm[i..].iter().map(|&p| xs[p].clone()));
            terms.push((sign, alg.bracket(&outer_args)?));
        }
    }
    alg.combine(terms, total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiEntry {
    pub arity: usize,
    pub tuple: Vec<usize>,
    pub zero: bool,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiReport {
    pub convention: JacobiConvention,
    pub max_arity: usize,
    pub checked: usize,
    pub all_zero: bool,
    /// Nonzero residuals only, in tuple order.
    pub failures: Vec<JacobiEntry>,
}

impl JacobiReport {
    pub fn failures_at(&self, arity: usize) -> usize {
        self.failures.iter().filter(|e| e.arity == arity).count()
    }
}

/// Evaluates every identity of arity `1..=max_arity` on all non-decreasing
/// tuples of `elements`. By graded skew-symmetry of the Jacobiator this
/// covers every ordered tuple.
pub fn jacobi_report<A: BracketAlgebra>(
    alg: &A,
    elements: &[A::Elem],
    max_arity: usize,
    conv: JacobiConvention,
) -> Result<JacobiReport> {
    let tuples: Vec<Vec<usize>> = (1..=max_arity).flat_map(|k| multisets(elements.len(), k)).collect();
    let entries: Vec<JacobiEntry> = tuples
        .par_iter()
        .map(|t| {
            let xs: Vec<A::Elem> = t.iter().map(|&i| elements[i].clone()).collect();
            let r = jacobi_residual(alg, &xs, conv)?;
            let zero = alg.is_zero(&r);
            Ok(JacobiEntry {
                arity: t.len(),
                tuple: t.clone(),
                zero,
                residual: if zero { "0".into() } else { r.to_string() },
            })
        })
        .collect::<Result<_>>()?;
    let checked = entries.len();
    let failures: Vec<JacobiEntry> = entries.into_iter().filter(|e| !e.zero).collect();
    Ok(JacobiReport {
        convention: conv,
        max_arity,
        checked,
        all_zero: failures.is_empty(),
        failures,
    })
}

//! Shuffles, multisets and Koszul signs.

/// All `i`-element subsets of `0..n`, each increasing, in lexicographic order.
pub fn subsets(n: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(i);
    fn rec(start: usize, n: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == i {
            out.push(cur.clone());
            return;
        }
        for s in start..n {
            if n - s < i - cur.len() {
                break;
            }
            cur.push(s);
            rec(s + 1, n, i, cur, out);
            cur.pop();
        }
    }
    rec(0, n, i, &mut cur, &mut out);
    out
}

/// `(i, n−i)`-unshuffles: the permutation listing `chosen` first, then the rest,
/// both in increasing order.
pub fn unshuffles(n: usize, i: usize) -> Vec<Vec<usize>> {
    subsets(n, i)
        .into_iter()
        .map(|s| {
            let mut p = s.clone();
            p.extend((0..n).filter(|x| !s.contains(x)));
            p
        })
        .collect()
}

/// Unshuffles for the block sizes `sizes` (summing to `n`).
pub fn block_unshuffles(sizes: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = sizes.iter().sum();
    let mut out = Vec::new();
    fn rec(rest: &[usize], remaining: Vec<usize>, prefix: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some((&k, tail)) = rest.split_first() else {
            out.push(prefix);
            return;
        };
        for s in subsets(remaining.len(), k) {
            let chosen: Vec<usize> = s.iter().map(|&i| remaining[i]).collect();
            let left: Vec<usize> = remaining.iter().copied().filter(|x| !chosen.contains(x)).collect();
            let mut p = prefix.clone();
            p.extend(chosen);
            rec(tail, left, p, out);
        }
    }
    rec(sizes, (0..n).collect(), Vec::new(), &mut out);
    out
}

/// Ordered compositions of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Non-decreasing `k`-tuples from `0..n`.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..n {
            cur.push(s);
            rec(s, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Koszul sign of reordering elements of the given degrees into the order
/// `perm` (a list of original positions). With `antisymmetric`, each
/// transposition carries an extra `−1`.
pub fn koszul_sign(degrees: &[i64], perm: &[usize], antisymmetric: bool) -> i64 {
    let mut s = 1;
    for p in 0..perm.len() {
        for q in p + 1..perm.len() {
            let (a, b) = (perm[p], perm[q]);
            if a > b {
                if (degrees[a] * degrees[b]).rem_euclid(2) == 1 {
                    s = -s;
                }
                if antisymmetric {
                    s = -s;
                }
            }
        }
    }
    s
}

pub fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

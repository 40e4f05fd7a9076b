//! Exact sparse linear algebra over ℚ(i)(tau), and integer lattice solves.
//!
//! Matrices are split into connected blocks (rows and columns joined by
//! nonzero entries), which for Fourier-graded operators are the individual
//! wave modes; each block is reduced densely.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{clear_denominators, RatFn, Scalar};

pub type SparseVec = BTreeMap<usize, Scalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Scalar>>,
}

/// Row and column indices of one connected block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Reduced row echelon form of a dense block.
struct Echelon {
    rows: Vec<Vec<RatFn>>,
    pivots: Vec<usize>,
}

fn echelon(mut m: Vec<Vec<RatFn>>, ncols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len())
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].weight())
        else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.sub(&f.mul(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(pivots.len().max(r));
    Echelon { rows: m, pivots }
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, Scalar> {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.data[r].get(&c).cloned().unwrap_or_default()
    }

    /// Adds `s` to entry `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, s: &Scalar) {
        assert!(
            r < self.rows && c < self.cols,
            "entry ({r},{c}) outside {}x{}",
            self.rows,
            self.cols
        );
        if s.is_zero() {
            return;
        }
        let e = self.data[r].entry(c).or_default();
        *e += s;
        if e.is_zero() {
            self.data[r].remove(&c);
        }
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::new(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, s) in row.iter().enumerate() {
                m.add(r, c, s);
            }
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.data
            .iter()
            .map(|row| row.iter().fold(Scalar::zero(), |acc, (c, s)| &acc + &(s * &x[*c])))
            .collect()
    }

    pub fn mul_sparse(&self, x: &SparseVec) -> Vec<Scalar> {
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|(c, s)| x.get(c).map(|v| s * v))
                    .fold(Scalar::zero(), |acc, t| &acc + &t)
            })
            .collect()
    }

    /// `self · o`.
    pub fn matmul(&self, o: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != o.rows {
            return Err(Error::DegreeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = SparseMatrix::new(self.rows, o.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (k, a) in row {
                for (c, b) in &o.data[*k] {
                    out.add(r, *c, &(a * b));
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::new(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for (c, s) in row {
                t.add(*c, r, s);
            }
        }
        t
    }

    /// Connected blocks, ordered by their smallest column; empty rows and
    /// columns belong to no block.
    pub fn blocks(&self) -> Vec<Block> {
        let mut uf = UnionFind((0..self.cols).collect());
        for row in &self.data {
            let mut it = row.keys();
            if let Some(&first) = it.next() {
                for &c in it {
                    uf.union(first, c);
                }
            }
        }
        let mut by_root: BTreeMap<usize, Block> = BTreeMap::new();
        for (r, row) in self.data.iter().enumerate() {
            if let Some(&c) = row.keys().next() {
                let root = uf.find(c);
                by_root
                    .entry(root)
                    .or_insert_with(|| Block {
                        rows: vec![],
                        cols: vec![],
                    })
                    .rows
                    .push(r);
            }
        }
        for c in 0..self.cols {
            let root = uf.find(c);
            if let Some(b) = by_root.get_mut(&root) {
                b.cols.push(c);
            }
        }
        by_root.into_values().collect()
    }

    fn dense_block(&self, b: &Block, extra: Option<&[Scalar]>) -> Vec<Vec<RatFn>> {
        let pos: BTreeMap<usize, usize> = b.cols.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let width = b.cols.len() + usize::from(extra.is_some());
        b.rows
            .iter()
            .map(|&r| {
                let mut row = vec![RatFn::zero(); width];
                for (c, s) in &self.data[r] {
                    row[pos[c]] = RatFn::from(s);
                }
                if let Some(rhs) = extra {
                    row[b.cols.len()] = RatFn::from(&rhs[r]);
                }
                row
            })
            .collect()
    }

    fn reduce_blocks(&self) -> Vec<(Block, Echelon)> {
        self.blocks()
            .into_par_iter()
            .map(|b| {
                let m = self.dense_block(&b, None);
                let e = echelon(m, b.cols.len());
                (b, e)
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.reduce_blocks().iter().map(|(_, e)| e.pivots.len()).sum()
    }

    /// A basis of the right kernel, one vector per free column, rescaled into
    /// the Laurent ring. Columns outside every block are free unit vectors.
    pub fn nullspace(&self) -> Vec<SparseVec> {
        let mut out = Vec::new();
        let mut covered = vec![false; self.cols];
        for (b, e) in self.reduce_blocks() {
            for &c in &b.cols {
                covered[c] = true;
            }
            let is_pivot: Vec<bool> = {
                let mut v = vec![false; b.cols.len()];
                for &p in &e.pivots {
                    v[p] = true;
                }
                v
            };
            for f in (0..b.cols.len()).filter(|&f| !is_pivot[f]) {
                let mut entries = vec![(b.cols[f], RatFn::one())];
                for (row, &p) in e.rows.iter().zip(&e.pivots) {
                    if !row[f].is_zero() {
                        entries.push((b.cols[p], row[f].neg()));
                    }
                }
                let vals: Vec<RatFn> = entries.iter().map(|(_, v)| v.clone()).collect();
                let scaled = clear_denominators(&vals);
                out.push(entries.iter().map(|(c, _)| *c).zip(scaled).collect());
            }
        }
        for c in (0..self.cols).filter(|&c| !covered[c]) {
            out.push(std::iter::once((c, Scalar::one())).collect());
        }
        out.sort_by_key(|v: &SparseVec| v.keys().next_back().copied());
        out
    }

    /// One solution of `A x = b` (free variables zero), `Ok(None)` when the
    /// system is inconsistent, and `OutsideLaurent` when the particular
    /// solution is not a Laurent polynomial in tau.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<SparseVec>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        for (r, row) in self.data.iter().enumerate() {
            if row.is_empty() && !b[r].is_zero() {
                return Ok(None);
            }
        }
        let results: Vec<Option<Vec<(usize, RatFn)>>> = self
            .blocks()
            .into_par_iter()
            .map(|blk| {
                let m = self.dense_block(&blk, Some(b));
                let n = blk.cols.len();
                let e = echelon(m, n + 1);
                if e.pivots.last() == Some(&n) {
                    return None;
                }
                Some(
                    e.rows
                        .iter()
                        .zip(&e.pivots)
                        .filter(|(row, _)| !row[n].is_zero())
                        .map(|(row, &p)| (blk.cols[p], row[n].clone()))
                        .collect(),
                )
            })
            .collect();
        let mut x = SparseVec::new();
        for res in results {
            let Some(entries) = res else { return Ok(None) };
            for (c, v) in entries {
                let s = v.to_scalar().ok_or_else(|| {
                    Error::OutsideLaurent(format!("solution entry {c} has a non-monomial denominator in tau"))
                })?;
                x.insert(c, s);
            }
        }
        Ok(Some(x))
    }
}

/// Integer solution of `A x = b` for an integer matrix given by rows, via a
/// column Hermite reduction `A U = H` with unimodular `U`.
pub fn solve_integer(a: &[Vec<BigInt>], b: &[BigInt], ncols: usize) -> Option<Vec<BigInt>> {
    let m = a.len();
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| {
            (0..ncols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let col_op = |mat: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        for row in mat.iter_mut() {
            if !row[src].is_zero() {
                let t = &row[src] * q;
                row[dst] -= t;
            }
        }
    };
    let swap_cols = |mat: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    };
    let mut k = 0;
    let mut pivot_rows: Vec<Option<usize>> = vec![None; m];
    for r in 0..m {
        if k == ncols {
            break;
        }
        loop {
            let nz: Vec<usize> = (k..ncols).filter(|&c| !h[r][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&c| h[r][c].abs()).unwrap();
            if best != k {
                swap_cols(&mut h, best, k);
                swap_cols(&mut u, best, k);
            }
            if nz.len() == 1 && nz[0] == best {
                break;
            }
            for c in k + 1..ncols {
                if h[r][c].is_zero() {
                    continue;
                }
                let q = h[r][c].div_floor(&h[r][k]);
                col_op(&mut h, c, k, &q);
                col_op(&mut u, c, k, &q);
            }
        }
        if !h[r][k].is_zero() {
            pivot_rows[r] = Some(k);
            k += 1;
        }
    }
    let mut y = vec![BigInt::zero(); ncols];
    for r in 0..m {
        let acc: BigInt = (0..k)
            .filter(|&j| Some(j) != pivot_rows[r])
            .map(|j| &h[r][j] * &y[j])
            .sum();
        let rest = &b[r] - acc;
        match pivot_rows[r] {
            Some(c) => {
                if !rest.is_multiple_of(&h[r][c]) {
                    return None;
                }
                y[c] = rest / &h[r][c];
            }
            None => {
                if !rest.is_zero() {
                    return None;
                }
            }
        }
    }
    Some((0..ncols).map(|i| (0..ncols).map(|j| &u[i][j] * &y[j]).sum()).collect())
}

/// Integer solution of a rational system; each row is scaled to integers.
pub fn solve_integer_rational(a: &[Vec<BigRational>], b: &[BigRational], ncols: usize) -> Option<Vec<BigInt>> {
    let mut ai = Vec::with_capacity(a.len());
    let mut bi = Vec::with_capacity(b.len());
    for (row, rhs) in a.iter().zip(b) {
        let l = row
            .iter()
            .chain(std::iter::once(rhs))
            .fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let scale = BigRational::from_integer(l);
        ai.push(row.iter().map(|q| (q * &scale).to_integer()).collect());
        bi.push((rhs * &scale).to_integer());
    }
    solve_integer(&ai, &bi, ncols)
}

/// Solution of `A x = b` in which the columns `int_cols` must take integer
/// values. The continuous columns are eliminated through the left kernel of
/// their submatrix; the remaining rational conditions on the integer
/// columns are solved by Hermite reduction.
pub fn solve_mixed(a: &SparseMatrix, int_cols: &[usize], b: &[Scalar]) -> Result<Option<SparseVec>> {
    let is_int: Vec<bool> = (0..a.cols()).map(|c| int_cols.contains(&c)).collect();
    let cont: Vec<usize> = (0..a.cols()).filter(|&c| !is_int[c]).collect();
    let mut ac = SparseMatrix::new(a.rows(), cont.len());
    let mut ay = SparseMatrix::new(a.rows(), int_cols.len());
    let ipos: BTreeMap<usize, usize> = int_cols.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let cpos: BTreeMap<usize, usize> = cont.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    for r in 0..a.rows() {
        for (c, v) in a.row(r) {
            match ipos.get(c) {
                Some(&i) => ay.add(r, i, v),
                None => ac.add(r, cpos[c], v),
            }
        }
    }
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    let ayt = ay.transpose();
    for l in ac.transpose().nullspace() {
        let coeffs: Vec<Scalar> = (0..int_cols.len())
            .map(|i| {
                l.iter()
                    .fold(Scalar::zero(), |acc, (r, lv)| &acc + &(lv * &ayt.get(i, *r)))
            })
            .collect();
        let e = l.iter().fold(Scalar::zero(), |acc, (r, lv)| &acc + &(lv * &b[*r]));
        let mut keys: BTreeSet<(i32, bool)> = BTreeSet::new();
        for s in coeffs.iter().chain(std::iter::once(&e)) {
            for (k, g) in s.terms() {
                if !g.re.is_zero() {
                    keys.insert((*k, false));
                }
                if !g.im.is_zero() {
                    keys.insert((*k, true));
                }
            }
        }
        for (k, im) in keys {
            let part = |s: &Scalar| {
                let g = s.coeff(k);
                if im {
                    g.im
                } else {
                    g.re
                }
            };
            rows.push(coeffs.iter().map(part).collect());
            rhs.push(part(&e));
        }
    }
    let Some(y) = solve_integer_rational(&rows, &rhs, int_cols.len()) else {
        return Ok(None);
    };
    let ys: Vec<Scalar> = y
        .iter()
        .map(|v| Scalar::from_rational(BigRational::from_integer(v.clone())))
        .collect();
    let shifted: Vec<Scalar> = ay.mul_vec(&ys).iter().zip(b).map(|(v, bi)| bi - v).collect();
    let Some(xc) = ac.solve(&shifted)? else { return Ok(None) };
    let mut x = SparseVec::new();
    for (i, v) in xc {
        x.insert(cont[i], v);
    }
    for (i, v) in ys.into_iter().enumerate() {
        if !v.is_zero() {
            x.insert(int_cols[i], v);
        }
    }
    Ok(Some(x))
}

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::chart::ChartRepr;
use crate::exterior::{AffineMap, Axis, Chart, ChartRef};
use crate::scalar::{int, rat};

/// Arcs `U_0, U_1, U_2` of the circle cover, as lifted intervals.
pub fn circle_arcs() -> [(BigRational, BigRational); 3] {
    [(rat(-1, 8), rat(3, 8)), (rat(1, 8), rat(5, 8)), (rat(3, 8), rat(9, 8))]
}

/// Cut points where a loop walk switches from arc `j` to arc `j + 1`
/// (the last one wraps back to `U_0`), and the segment of each arc.
pub fn circle_segments() -> [(BigRational, BigRational); 3] {
    [(int(0), rat(1, 4)), (rat(1, 4), rat(1, 2)), (rat(1, 2), int(1))]
}

fn open_overlap(a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> Option<(BigRational, BigRational)> {
    let lo = a.0.clone().max(b.0.clone());
    let hi = a.1.clone().min(b.1.clone());
    (lo < hi).then_some((lo, hi))
}

/// Integer `t` with `U_j + t` meeting `U_m` in the coordinates of `U_m`.
fn lift_shift(m: usize, j: usize) -> i64 {
    let arcs = circle_arcs();
    (-1..=1)
        .find(|&t| {
            let s = (&arcs[j].0 + int(t), &arcs[j].1 + int(t));
            open_overlap(&arcs[m], &s).is_some()
        })
        .expect("arcs of the circle cover overlap pairwise")
}

/// Intersection of the arcs in `set` (at most two), in the coordinates of
/// its smallest member.
fn arc_intersection(set: &[usize]) -> Option<(BigRational, BigRational)> {
    let arcs = circle_arcs();
    let m = set[0];
    let mut acc = arcs[m].clone();
    for &j in &set[1..] {
        let t = int(lift_shift(m, j));
        acc = open_overlap(&acc, &(&arcs[j].0 + &t, &arcs[j].1 + &t))?;
    }
    Some(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NerveKind {
    /// Product of the three-arc circle cover, `d` factors.
    Torus { dim: usize },
    /// A single patch covering the whole chart.
    Trivial { chart: ChartRepr },
}

/// The `i`-th face of a simplex (vertex `i` omitted), with the coordinate
/// change from the simplex chart to the face chart.
#[derive(Clone, Debug)]
pub struct Face {
    pub index: usize,
    pub offsets: Vec<BigRational>,
    pub map: AffineMap,
}

#[derive(Clone, Debug)]
pub struct Simplex {
    pub vertices: Vec<usize>,
    pub chart: ChartRef,
    pub faces: Vec<Face>,
    /// Inclusion of the simplex chart into the manifold chart.
    pub to_global: AffineMap,
}

/// Nerve of a finite good cover, with patch charts and face maps.
#[derive(Debug)]
pub struct Nerve {
    kind: NerveKind,
    global: ChartRef,
    levels: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

pub type NerveRef = Arc<Nerve>;

/// Highest simplex dimension materialized for product covers.
pub const MAX_SIMPLEX_DIM: usize = 4;

impl Nerve {
    pub fn circle() -> NerveRef {
        Nerve::torus(1).expect("circle nerve")
    }

    /// Product cover of `T^d`, `1 ≤ d ≤ 3`.
    pub fn torus(d: usize) -> Result<NerveRef> {
        if !(1..=3).contains(&d) {
            return Err(Error::WrongNerve(format!(
                "torus nerves exist for d = 1, 2, 3, not {d}"
            )));
        }
        let patches = 3usize.pow(d as u32);
        let digits = |p: usize| -> Vec<usize> { (0..d).map(|a| (p / 3usize.pow(a as u32)) % 3).collect() };
        let valid = |vs: &[usize]| {
            (0..d).all(|a| {
                let mut s: Vec<usize> = vs.iter().map(|&p| digits(p)[a]).collect();
                s.sort_unstable();
                s.dedup();
                s.len() <= 2
            })
        };
        let mut vertex_sets: Vec<Vec<Vec<usize>>> = vec![(0..patches).map(|p| vec![p]).collect()];
        for q in 1..=MAX_SIMPLEX_DIM {
            let next: Vec<Vec<usize>> = vertex_sets[q - 1]
                .iter()
                .flat_map(|s| {
                    let last = *s.last().expect("nonempty simplex");
                    (last + 1..patches).map(move |p| [s.clone(), vec![p]].concat())
                })
                .filter(|s| valid(s))
                .collect();
            if next.is_empty() {
                break;
            }
            vertex_sets.push(next);
        }
        let global = Chart::torus(d);
        let mut levels: Vec<Vec<Simplex>> = Vec::new();
        let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
        for (q, sets) in vertex_sets.into_iter().enumerate() {
            let mut level = Vec::with_capacity(sets.len());
            for vs in sets {
                let proj: Vec<Vec<usize>> = (0..d)
                    .map(|a| {
                        let mut s: Vec<usize> = vs.iter().map(|&p| digits(p)[a]).collect();
                        s.sort_unstable();
                        s.dedup();
                        s
                    })
                    .collect();
                let axes = proj
                    .iter()
                    .map(|s| {
                        let (lo, hi) = arc_intersection(s).expect("pairwise arcs meet");
                        Axis::branch(lo, hi)
                    })
                    .collect();
                let chart = Chart::new(axes)?;
                let mut faces = Vec::new();
                if q > 0 {
                    for i in 0..vs.len() {
                        let mut fv = vs.clone();
                        fv.remove(i);
                        let fidx = index[q - 1][&fv];
                        let face: &Simplex = &levels[q - 1][fidx];
                        let offsets: Vec<BigRational> = (0..d)
                            .map(|a| {
                                let m = proj[a][0];
                                let fm = fv.iter().map(|&p| digits(p)[a]).min().expect("nonempty face");
                                int(-lift_shift(m, fm))
                            })
                            .collect();
                        let map = AffineMap::shift(chart.clone(), face.chart.clone(), &offsets)?;
                        faces.push(Face {
                            index: fidx,
                            offsets,
                            map,
                        });
                    }
                }
                let to_global = AffineMap::shift(chart.clone(), global.clone(), &vec![BigRational::zero(); d])?;
                level.push(Simplex {
                    vertices: vs,
                    chart,
                    faces,
                    to_global,
                });
            }
            index.push(level.iter().enumerate().map(|(i, s)| (s.vertices.clone(), i)).collect());
            levels.push(level);
        }
        Ok(Arc::new(Nerve {
            kind: NerveKind::Torus { dim: d },
            global,
            levels,
            index,
        }))
    }

    /// One patch equal to `chart`.
    pub fn trivial(chart: ChartRef) -> NerveRef {
        let s = Simplex {
            vertices: vec![0],
            chart: chart.clone(),
            faces: vec![],
            to_global: AffineMap::identity(chart.clone()),
        };
        Arc::new(Nerve {
            kind: NerveKind::Trivial { chart: chart.to_repr() },
            global: chart,
            levels: vec![vec![s]],
            index: vec![std::iter::once((vec![0], 0)).collect()],
        })
    }

    pub fn from_kind(kind: &NerveKind) -> Result<NerveRef> {
        match kind {
            NerveKind::Torus { dim } => Nerve::torus(*dim),
            NerveKind::Trivial { chart } => Ok(Nerve::trivial(Chart::from_repr(chart)?)),
        }
    }

    pub fn kind(&self) -> &NerveKind {
        &self.kind
    }

    pub fn global(&self) -> &ChartRef {
        &self.global
    }

    /// Dimension of the covered manifold.
    pub fn dim(&self) -> usize {
        self.global.dim()
    }

    pub fn torus_dim(&self) -> Option<usize> {
        match self.kind {
            NerveKind::Torus { dim } => Some(dim),
            NerveKind::Trivial { .. } => None,
        }
    }

    /// `q`-simplices (empty beyond the top dimension).
    pub fn simplices(&self, q: usize) -> &[Simplex] {
        self.levels.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, q: usize) -> usize {
        self.simplices(q).len()
    }

    pub fn find(&self, vertices: &[usize]) -> Option<(usize, usize)> {
        let q = vertices.len().checked_sub(1)?;
        self.index.get(q)?.get(vertices).map(|&i| (q, i))
    }

    /// Highest materialized simplex dimension.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn same(&self, o: &Nerve) -> bool {
        self.kind == o.kind
    }

    pub fn ensure_same(&self, o: &Nerve) -> Result<()> {
        if self.same(o) {
            Ok(())
        } else {
            Err(Error::NerveMismatch(format!("{:?} vs {:?}", self.kind, o.kind)))
        }
    }

    /// Patch index on `T^d` with the given per-axis arc labels.
    pub fn patch(&self, digits: &[usize]) -> usize {
        digits.iter().rev().fold(0, |acc, &j| acc * 3 + j)
    }
}

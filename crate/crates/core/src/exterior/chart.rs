use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{fmt_rat, parse_rat};

/// How a coordinate axis behaves.
///
/// * `Line`: a non-periodic axis; coefficients are polynomial in it.
/// * `Circle`: a periodic axis of unit period on a manifold-level chart;
///   coefficients are Fourier modes `E_k` only.
/// * `Branch`: a contractible patch of a circle, with a real branch
///   coordinate; both polynomials and Fourier modes are allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisKind {
    Line,
    Circle,
    Branch,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Axis {
    pub kind: AxisKind,
    /// Closed domain `[lo, hi]` of the coordinate, when restricted.
    pub domain: Option<(BigRational, BigRational)>,
}

impl Axis {
    pub fn line() -> Self {
        Axis {
            kind: AxisKind::Line,
            domain: None,
        }
    }

    pub fn circle() -> Self {
        Axis {
            kind: AxisKind::Circle,
            domain: None,
        }
    }

    pub fn branch(lo: BigRational, hi: BigRational) -> Self {
        Axis {
            kind: AxisKind::Branch,
            domain: Some((lo, hi)),
        }
    }

    pub fn allows_polynomial(&self) -> bool {
        self.kind != AxisKind::Circle
    }

    pub fn allows_fourier(&self) -> bool {
        self.kind != AxisKind::Line
    }
}

/// A flat coordinate chart: a product of lines, circles and circle branches.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    axes: Vec<Axis>,
}

pub type ChartRef = Arc<Chart>;

impl Chart {
    pub fn new(axes: Vec<Axis>) -> Result<ChartRef> {
        if axes.is_empty() {
            return Err(Error::InvalidChart("dimension must be at least 1".into()));
        }
        if axes.len() > 16 {
            return Err(Error::InvalidChart("dimension above 16 is not supported".into()));
        }
        for (j, a) in axes.iter().enumerate() {
            match (&a.kind, &a.domain) {
                (AxisKind::Circle, Some(_)) => {
                    return Err(Error::InvalidChart(format!("circle axis {j} cannot carry a domain")))
                }
                (AxisKind::Branch, None) => return Err(Error::InvalidChart(format!("branch axis {j} needs a domain"))),
                (AxisKind::Branch, Some((lo, hi))) => {
                    let len = hi - lo;
                    if len <= BigRational::zero() || len > BigRational::one() {
                        return Err(Error::InvalidChart(format!(
                            "branch interval on axis {j} must have length in (0, 1]"
                        )));
                    }
                }
                (AxisKind::Line, Some((lo, hi))) if hi <= lo => {
                    return Err(Error::InvalidChart(format!("empty domain on axis {j}")))
                }
                _ => {}
            }
        }
        Ok(Arc::new(Chart { axes }))
    }

    /// ℝ^d.
    pub fn euclidean(d: usize) -> ChartRef {
        Chart::new(vec![Axis::line(); d]).expect("valid euclidean chart")
    }

    /// The unit torus T^d.
    pub fn torus(d: usize) -> ChartRef {
        Chart::new(vec![Axis::circle(); d]).expect("valid torus chart")
    }

    /// Compact descriptor: one letter per axis, `r` for a line and `t` for a
    /// circle, e.g. `rrr` for ℝ³ or `tt` for T². `R3`/`T2` style names are
    /// accepted as shorthand.
    pub fn from_code(code: &str) -> Result<ChartRef> {
        let code = code.trim();
        let bad = || Error::Parse(format!("invalid chart descriptor `{code}`"));
        let mut chars = code.chars();
        if let Some(head @ ('R' | 'T')) = chars.next() {
            let d: usize = chars.as_str().parse().map_err(|_| bad())?;
            return Ok(if head == 'R' {
                Chart::euclidean(d)
            } else {
                Chart::torus(d)
            });
        }
        let axes = code
            .chars()
            .map(|c| match c {
                'r' => Ok(Axis::line()),
                't' => Ok(Axis::circle()),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>>>()?;
        Chart::new(axes)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, j: usize) -> &Axis {
        &self.axes[j]
    }

    pub fn is_periodic(&self, j: usize) -> bool {
        self.axes[j].kind == AxisKind::Circle
    }

    pub fn is_torus(&self) -> bool {
        self.axes.iter().all(|a| a.kind == AxisKind::Circle)
    }

    pub fn is_patch(&self) -> bool {
        self.axes.iter().any(|a| a.domain.is_some())
    }

    pub fn contains(&self, point: &[BigRational]) -> bool {
        point.len() == self.dim()
            && self.axes.iter().zip(point).all(|(a, x)| match &a.domain {
                Some((lo, hi)) => lo <= x && x <= hi,
                None => true,
            })
    }

    pub fn to_repr(&self) -> ChartRepr {
        ChartRepr {
            axes: self
                .axes
                .iter()
                .map(|a| AxisRepr {
                    kind: a.kind,
                    domain: a.domain.as_ref().map(|(l, h)| [fmt_rat(l), fmt_rat(h)]),
                })
                .collect(),
        }
    }

    pub fn from_repr(r: &ChartRepr) -> Result<ChartRef> {
        let axes = r
            .axes
            .iter()
            .map(|a| {
                let domain = match &a.domain {
                    Some([l, h]) => Some((parse_rat(l)?, parse_rat(h)?)),
                    None => None,
                };
                Ok(Axis { kind: a.kind, domain })
            })
            .collect::<Result<Vec<_>>>()?;
        Chart::new(axes)
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axes {
            let c = match a.kind {
                AxisKind::Line => 'r',
                AxisKind::Circle => 't',
                AxisKind::Branch => 'b',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub fn same_chart(a: &ChartRef, b: &ChartRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub fn ensure_same_chart(a: &ChartRef, b: &ChartRef) -> Result<()> {
    if same_chart(a, b) {
        Ok(())
    } else {
        Err(Error::ChartMismatch(format!("{a} vs {b}")))
    }
}

/// JSON chart descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChartRepr {
    pub axes: Vec<AxisRepr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AxisRepr {
    pub kind: AxisKind,
    #[serde(default)]
    pub domain: Option<[String; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn codes() {
        assert_eq!(Chart::from_code("R3").unwrap().dim(), 3);
        assert!(Chart::from_code("tt").unwrap().is_torus());
        assert!(Chart::from_code("rx").is_err());
    }

    #[test]
    fn branch_intervals_are_bounded() {
        assert!(Chart::new(vec![Axis::branch(rat(0, 1), rat(3, 2))]).is_err());
        assert!(Chart::new(vec![Axis::branch(rat(1, 2), rat(1, 2))]).is_err());
        assert!(Chart::new(vec![Axis::branch(rat(-1, 8), rat(3, 8))]).is_ok());
        assert!(Chart::new(vec![]).is_err());
    }
}

//! Indecomposable shapes of bounded double complexes and the
//! cohomology each one carries.
//!
//! Odd zigzags are written S_d^{p,q}: the cells of total degree d run
//! from (p, d-p) to (d-q, q), with length 2|p+q-d|+1. Even zigzags are
//! named by the page differential they realize: `Column` for d_r of the
//! filtration by p (d_0 = ∂̄), `Row` for the filtration by q (d_0 = ∂).

use serde::Serialize;

pub type Bidegree = (i32, i32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Orientation {
    Column,
    Row,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Shape {
    Odd { d: i32, p: i32, q: i32 },
    /// Realizes d_r (r >= 1) with source at (p, q).
    Even { orientation: Orientation, r: i32, p: i32, q: i32 },
    /// Square with bottom-left corner at (p, q).
    Square { p: i32, q: i32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arrow {
    D1,
    D2,
}

/// Cells of a shape with the nonzero components of d between them.
#[derive(Clone, Debug)]
pub struct ShapeCells {
    pub cells: Vec<Bidegree>,
    /// (source cell, target cell, which differential)
    pub arrows: Vec<(usize, usize, Arrow)>,
}

impl Shape {
    pub fn cells(&self) -> ShapeCells {
        let mut cells = vec![];
        let mut arrows = vec![];
        match *self {
            Shape::Odd { d, p, q } => {
                if p + q == d {
                    cells.push((p, q));
                } else if p + q > d {
                    // degree-d cells (i, d-i), i = d-q..=p, bottom-left corners between
                    let top: Vec<usize> = (d - q..=p)
                        .map(|i| {
                            cells.push((i, d - i));
                            cells.len() - 1
                        })
                        .collect();
                    for (k, i) in (d - q..p).enumerate() {
                        cells.push((i, d - 1 - i));
                        let c = cells.len() - 1;
                        arrows.push((c, top[k], Arrow::D2));
                        arrows.push((c, top[k + 1], Arrow::D1));
                    }
                } else {
                    let low: Vec<usize> = (p..=d - q)
                        .map(|i| {
                            cells.push((i, d - i));
                            cells.len() - 1
                        })
                        .collect();
                    for (k, i) in (p + 1..=d - q).enumerate() {
                        cells.push((i, d + 1 - i));
                        let c = cells.len() - 1;
                        arrows.push((low[k], c, Arrow::D1));
                        arrows.push((low[k + 1], c, Arrow::D2));
                    }
                }
            }
            Shape::Even { orientation, r, p, q } => {
                let (step, up, side) = match orientation {
                    Orientation::Column => ((1, -1), Arrow::D2, Arrow::D1),
                    Orientation::Row => ((-1, 1), Arrow::D1, Arrow::D2),
                };
                // x_i = (p, q) + i*step; c_i = x_i + e_up, where e_up is the
                // direction of `up`; x_{i} -side-> c_{i+1}
                let e_up = match up {
                    Arrow::D2 => (0, 1),
                    Arrow::D1 => (1, 0),
                };
                let x: Vec<usize> = (0..r)
                    .map(|i| {
                        cells.push((p + i * step.0, q + i * step.1));
                        cells.len() - 1
                    })
                    .collect();
                let c: Vec<usize> = (1..=r)
                    .map(|i| {
                        cells.push((p + i * step.0 + e_up.0, q + i * step.1 + e_up.1));
                        cells.len() - 1
                    })
                    .collect();
                for i in 0..r as usize {
                    arrows.push((x[i], c[i], side));
                    if i >= 1 {
                        arrows.push((x[i], c[i - 1], up));
                    }
                }
            }
            Shape::Square { p, q } => {
                cells = vec![(p, q), (p + 1, q), (p, q + 1), (p + 1, q + 1)];
                arrows = vec![(0, 1, Arrow::D1), (0, 2, Arrow::D2), (2, 3, Arrow::D1), (1, 3, Arrow::D2)];
            }
        }
        ShapeCells { cells, arrows }
    }

    pub fn size(&self) -> usize {
        match *self {
            Shape::Odd { d, p, q } => (2 * (p + q - d).abs() + 1) as usize,
            Shape::Even { r, .. } => 2 * r as usize,
            Shape::Square { .. } => 4,
        }
    }

    pub fn de_rham(&self) -> Option<i32> {
        match *self {
            Shape::Odd { d, .. } => Some(d),
            _ => None,
        }
    }

    /// ∂̄-cohomology (d_2 in the engine's convention).
    pub fn column(&self) -> Vec<Bidegree> {
        match *self {
            Shape::Odd { d, p, .. } => vec![(p, d - p)],
            Shape::Even { orientation: Orientation::Column, r, p, q } => vec![(p, q), (p + r, q - r + 1)],
            _ => vec![],
        }
    }

    /// ∂-cohomology (d_1).
    pub fn row(&self) -> Vec<Bidegree> {
        match *self {
            Shape::Odd { d, q, .. } => vec![(d - q, q)],
            Shape::Even { orientation: Orientation::Row, r, p, q } => vec![(p, q), (p - r + 1, q + r)],
            _ => vec![],
        }
    }

    pub fn bott_chern(&self) -> Vec<Bidegree> {
        match *self {
            Shape::Odd { d, p, q } if p + q >= d => (d - q..=p).map(|a| (a, d - a)).collect(),
            Shape::Odd { d, p, q } => (p + 1..=d - q).map(|a| (a, d + 1 - a)).collect(),
            Shape::Even { .. } => {
                let sc = self.cells();
                let r = sc.cells.len() / 2;
                sc.cells[r..].to_vec()
            }
            Shape::Square { .. } => vec![],
        }
    }

    pub fn aeppli(&self) -> Vec<Bidegree> {
        match *self {
            Shape::Odd { d, p, q } if p + q > d => (d - q..p).map(|a| (a, d - 1 - a)).collect(),
            Shape::Odd { d, p, q } => (p..=d - q).map(|a| (a, d - a)).collect(),
            Shape::Even { .. } => {
                let sc = self.cells();
                let r = sc.cells.len() / 2;
                sc.cells[..r].to_vec()
            }
            Shape::Square { .. } => vec![],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_match_cells() {
        let shapes = [
            Shape::Odd { d: 2, p: 1, q: 1 },
            Shape::Odd { d: 3, p: 2, q: 2 },
            Shape::Odd { d: 1, p: 0, q: 0 },
            Shape::Odd { d: 4, p: 0, q: 1 },
            Shape::Even { orientation: Orientation::Column, r: 2, p: 0, q: 2 },
            Shape::Even { orientation: Orientation::Row, r: 1, p: 1, q: 0 },
            Shape::Square { p: 0, q: 0 },
        ];
        for s in shapes {
            let c = s.cells();
            assert_eq!(c.cells.len(), s.size(), "{s:?}");
            let mut uniq = c.cells.clone();
            uniq.sort();
            uniq.dedup();
            assert_eq!(uniq.len(), c.cells.len());
            for &(a, b, dir) in &c.arrows {
                let (x, y) = (c.cells[a], c.cells[b]);
                match dir {
                    Arrow::D1 => assert_eq!((x.0 + 1, x.1), y),
                    Arrow::D2 => assert_eq!((x.0, x.1 + 1), y),
                }
            }
        }
    }

    #[test]
    fn odd_shape_of_length_three_corners() {
        // S_3^{2,2}: cells (1,2), (2,1) and the corner (1,1)
        let s = Shape::Odd { d: 3, p: 2, q: 2 };
        let mut c = s.cells().cells;
        c.sort();
        assert_eq!(c, vec![(1, 1), (1, 2), (2, 1)]);
        assert_eq!(s.aeppli(), vec![(1, 1)]);
        assert_eq!(s.bott_chern(), vec![(1, 2), (2, 1)]);
        assert_eq!(s.column(), vec![(2, 1)]);
        assert_eq!(s.row(), vec![(1, 2)]);
    }
}

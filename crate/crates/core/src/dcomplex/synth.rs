//! Random direct sums of zigzags and squares, disguised by a random
//! change of basis in every bidegree. Used to test the decomposition.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complex::{build_double_complex, DoubleComplex};
use super::fixture::Manifest;
use super::matrix::Matrix;
use super::scalar::{Field, GaussRat};
use super::shape::{Arrow, Bidegree, Orientation, Shape};

#[derive(Clone, Debug)]
pub struct SynthConfig {
    /// Cells lie in [0, box_size]².
    pub box_size: i32,
    pub odd: usize,
    pub even: usize,
    pub squares: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { box_size: 3, odd: 3, even: 2, squares: 1 }
    }
}

fn gauss(rng: &mut ChaCha8Rng) -> GaussRat {
    loop {
        let re: i64 = rng.gen_range(-3..=3);
        let im: i64 = if rng.gen_bool(0.3) { rng.gen_range(-2..=2) } else { 0 };
        if re != 0 || im != 0 {
            return GaussRat::new(re, im);
        }
    }
}

fn inside(s: &Shape, n: i32) -> bool {
    s.cells().cells.iter().all(|&(p, q)| (0..=n).contains(&p) && (0..=n).contains(&q))
}

pub fn random_shapes(rng: &mut ChaCha8Rng, cfg: &SynthConfig) -> Vec<Shape> {
    let n = cfg.box_size;
    let mut out = vec![];
    while out.iter().filter(|s| matches!(s, Shape::Odd { .. })).count() < cfg.odd {
        let p = rng.gen_range(0..=n);
        let q = rng.gen_range(0..=n);
        let d = p + q + rng.gen_range(-2..=2);
        let s = Shape::Odd { d, p, q };
        if inside(&s, n) {
            out.push(s);
        }
    }
    while out.iter().filter(|s| matches!(s, Shape::Even { .. })).count() < cfg.even {
        let orientation = if rng.gen_bool(0.5) { Orientation::Column } else { Orientation::Row };
        let s = Shape::Even { orientation, r: rng.gen_range(1..=3), p: rng.gen_range(0..=n), q: rng.gen_range(0..=n) };
        if inside(&s, n) {
            out.push(s);
        }
    }
    for _ in 0..cfg.squares {
        out.push(Shape::Square { p: rng.gen_range(0..n), q: rng.gen_range(0..n) });
    }
    out
}

pub fn manifest_of(shapes: &[Shape]) -> Manifest {
    let mut m = Manifest::default();
    for s in shapes {
        match *s {
            Shape::Odd { d, p, q } => *m.odd.entry((d, p, q)).or_default() += 1,
            Shape::Even { orientation, r, p, q } => *m.even.entry((orientation, r, p, q)).or_default() += 1,
            Shape::Square { p, q } => *m.squares.entry((p, q)).or_default() += 1,
        }
    }
    m
}

/// Direct sum of the given shapes with random nonzero coefficients,
/// followed by a random invertible change of basis in each bidegree.
pub fn assemble(shapes: &[Shape], rng: &mut ChaCha8Rng) -> DoubleComplex<GaussRat> {
    let mut labels: BTreeMap<Bidegree, Vec<String>> = BTreeMap::new();
    let mut place: Vec<Vec<(Bidegree, usize)>> = vec![];
    let mut counter = 0;
    for s in shapes {
        let cells = s.cells();
        place.push(
            cells
                .cells
                .iter()
                .map(|&b| {
                    let list = labels.entry(b).or_default();
                    list.push(format!("e{counter}"));
                    counter += 1;
                    (b, list.len() - 1)
                })
                .collect(),
        );
    }
    let dim = |b: Bidegree| labels.get(&b).map_or(0, |l| l.len());
    let mut d1: BTreeMap<Bidegree, Matrix<GaussRat>> = BTreeMap::new();
    let mut d2: BTreeMap<Bidegree, Matrix<GaussRat>> = BTreeMap::new();
    for (k, s) in shapes.iter().enumerate() {
        let cells = s.cells();
        let mut coeffs: Vec<GaussRat> = cells.arrows.iter().map(|_| gauss(rng)).collect();
        if let Shape::Square { .. } = s {
            // δα + γβ = 0 makes d1 d2 + d2 d1 vanish
            coeffs[3] = coeffs[2].mul(&coeffs[1]).div(&coeffs[0]).neg();
        }
        for (&(a, b, dir), v) in cells.arrows.iter().zip(coeffs) {
            let (sb, si) = place[k][a];
            let (tb, ti) = place[k][b];
            let map = match dir {
                Arrow::D1 => &mut d1,
                Arrow::D2 => &mut d2,
            };
            map.entry(sb).or_insert_with(|| Matrix::zeros(dim(tb), dim(sb), &())).set(ti, si, v);
        }
    }
    // change of basis y = T x in every bidegree
    let mut t: BTreeMap<Bidegree, (Matrix<GaussRat>, Matrix<GaussRat>)> = BTreeMap::new();
    for (&b, l) in &labels {
        let n = l.len();
        let mut fwd = Matrix::<GaussRat>::identity(n, &());
        let mut inv = Matrix::<GaussRat>::identity(n, &());
        if n > 1 {
            for _ in 0..3 * n {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                let c = gauss(rng);
                let mut e = Matrix::<GaussRat>::identity(n, &());
                e.set(i, j, c.clone());
                let mut ei = Matrix::<GaussRat>::identity(n, &());
                ei.set(i, j, c.neg());
                fwd = e.mul(&fwd, &());
                inv = inv.mul(&ei, &());
            }
        }
        t.insert(b, (fwd, inv));
    }
    let conj = |maps: BTreeMap<Bidegree, Matrix<GaussRat>>, step: (i32, i32)| {
        maps.into_iter()
            .map(|(b, m)| {
                let tb = (b.0 + step.0, b.1 + step.1);
                (b, t[&tb].0.mul(&m, &()).mul(&t[&b].1, &()))
            })
            .collect::<BTreeMap<_, _>>()
    };
    let d1 = conj(d1, (1, 0));
    let d2 = conj(d2, (0, 1));
    build_double_complex(labels, d1, d2, ()).expect("assembled sum is a double complex")
}

pub fn random_sum(seed: u64, cfg: &SynthConfig) -> (DoubleComplex<GaussRat>, Manifest) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes = random_shapes(&mut rng, cfg);
    let c = assemble(&shapes, &mut rng);
    (c, manifest_of(&shapes))
}

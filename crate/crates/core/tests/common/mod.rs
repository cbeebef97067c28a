#![allow(dead_code)]

use otlab_core::polyfield::{FieldDatum, Polynomial};
use otlab_core::relations::{enumerate_relations, RelationSet};
use otlab_core::units::{build_unit_system, UnitSystem, DEG12_POLY};
use otlab_core::Precision;
use rug::Rational;

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from(x)).collect()
}

fn system(poly: &[i64], units: Vec<Vec<Rational>>) -> UnitSystem {
    let k = FieldDatum::new(Polynomial::from_i64(poly).unwrap(), Precision::default()).unwrap();
    build_unit_system(k, units).unwrap()
}

/// x^3 - x - 1 with its root as unit, signature (1,1)
pub fn inoue() -> UnitSystem {
    system(&[-1, -1, 0, 1], vec![ints(&[0, 1, 0])])
}

/// x^5 - x - 1, signature (1,2)
pub fn one_two() -> UnitSystem {
    system(&[-1, -1, 0, 0, 0, 1], vec![ints(&[0, 1, 0, 0, 0])])
}

/// x^6 - 2x^5 + 3x^4 - 2x^3 + 4x^2 - 4x + 1, units β and 1 - β, signature (2,2)
pub fn pluriclosed22() -> UnitSystem {
    system(&[1, -4, 4, -2, 3, -2, 1], vec![ints(&[0, 1, 0, 0, 0, 0]), ints(&[1, -1, 0, 0, 0, 0])])
}

/// the degree-12 field with the root and 3 + 2√2 as units, signature (2,5)
pub fn deg12() -> UnitSystem {
    let r = |n: i64, d: i64| Rational::from((n, d));
    let v = vec![
        r(1277817, 219227),
        r(-1141, 2411497),
        r(-337736, 2411497),
        r(526285, 2411497),
        r(-6319256, 2411497),
        r(-1024748, 219227),
        r(-2628474, 2411497),
        r(-1390244, 219227),
        r(-8411104, 2411497),
        r(28695, 58817),
        r(-542226, 2411497),
        r(23433, 2411497),
    ];
    let mut u = vec![Rational::new(); 12];
    u[1] = Rational::from(1);
    system(&DEG12_POLY, vec![u, v])
}

pub fn corpus() -> Vec<(&'static str, UnitSystem)> {
    vec![("inoue", inoue()), ("one_two", one_two()), ("pluriclosed22", pluriclosed22()), ("deg12", deg12())]
}

pub fn relations(u: &UnitSystem) -> RelationSet {
    let r = enumerate_relations(u).unwrap();
    assert!(r.is_certified(), "{:?}", r.ambiguity_flags);
    r
}

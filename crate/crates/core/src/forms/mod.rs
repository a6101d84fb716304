// SPDX-License-Identifier: Apache-2.0

//! Positive definite binary quadratic forms: reduction, class enumeration,
//! representability and genus structure.

mod genus;

pub use genus::{
    genera_representing, genus_partition, genus_partition_residue_oracle, GenusPartition,
};

use serde::{Deserialize, Serialize};

use crate::arith::Discriminant;
use crate::error::{Error, Result};

/// Default cap on `m` for point representability queries.
pub const DEFAULT_REPRESENT_BUDGET: u64 = 10_000_000;

/// The form aX² + bXY + cY², written [a, b, c].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl QuadraticForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        QuadraticForm { a, b, c }
    }

    /// b² - 4ac, or `None` on overflow.
    pub fn discriminant(&self) -> Option<i64> {
        let d =
            i128::from(self.b) * i128::from(self.b) - 4 * i128::from(self.a) * i128::from(self.c);
        i64::try_from(d).ok()
    }

    pub fn is_primitive(&self) -> bool {
        gcd(
            gcd(self.a.unsigned_abs(), self.b.unsigned_abs()),
            self.c.unsigned_abs(),
        ) == 1
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && self.discriminant().is_some_and(|d| d < 0)
    }

    /// |b| ≤ a ≤ c, with b ≥ 0 whenever |b| = a or a = c.
    pub fn is_reduced(&self) -> bool {
        let QuadraticForm { a, b, c } = *self;
        b.abs() <= a && a <= c && !(b < 0 && (b.abs() == a || a == c))
    }

    #[inline]
    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (i128::from(x), i128::from(y));
        i128::from(self.a) * x * x + i128::from(self.b) * x * y + i128::from(self.c) * y * y
    }

    fn check_primitive_definite(&self) -> Result<i64> {
        match self.discriminant() {
            Some(d) if d < 0 && self.a > 0 && self.is_primitive() => Ok(d),
            _ => Err(Error::InvalidForm {
                a: self.a,
                b: self.b,
                c: self.c,
            }),
        }
    }
}

impl std::fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

/// [1, 0, -D/4] for D ≡ 0 and [1, 1, (1-D)/4] for D ≡ 1 (mod 4).
pub fn principal_form(d: i64) -> Result<QuadraticForm> {
    if d >= 0 {
        return Err(Error::InvalidDiscriminant(d));
    }
    match d.rem_euclid(4) {
        0 => Ok(QuadraticForm::new(1, 0, -d / 4)),
        1 => Ok(QuadraticForm::new(1, 1, (1 - d) / 4)),
        _ => Err(Error::InvalidDiscriminant(d)),
    }
}

/// The unique reduced form properly equivalent to `f`.
pub fn reduce(f: &QuadraticForm) -> Result<QuadraticForm> {
    f.check_primitive_definite()?;
    let (mut a, mut b, mut c) = (i128::from(f.a), i128::from(f.b), i128::from(f.c));
    loop {
        // X -> X + kY moves b into (-a, a]
        if b > a || b <= -a {
            let k = (a - b).div_euclid(2 * a);
            c += k * (a * k + b);
            b += 2 * a * k;
        }
        if a > c {
            // (X, Y) -> (-Y, X)
            (a, b, c) = (c, -b, a);
            continue;
        }
        break;
    }
    if a == c && b < 0 {
        b = -b;
    }
    Ok(QuadraticForm::new(a as i64, b as i64, c as i64))
}

fn scan_reduced<F: FnMut(QuadraticForm)>(d: i64, mut visit: F) {
    let abs = d.unsigned_abs() as i64;
    let a_max = (abs / 3).isqrt();
    let parity = abs & 1;
    for a in 1..=a_max {
        let four_a = 4 * a;
        // b ≡ D (mod 2)
        let mut b = -a;
        if (b - parity).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b + abs;
            if num % four_a == 0 {
                let c = num / four_a;
                let boundary_ok = !(b < 0 && (-b == a || a == c));
                if c >= a && boundary_ok {
                    let g = gcd(gcd(a as u64, b.unsigned_abs()), c as u64);
                    if g == 1 {
                        visit(QuadraticForm::new(a, b, c));
                    }
                }
            }
            b += 2;
        }
    }
}

/// The primitive reduced forms of discriminant D, sorted by (a, b, c).
pub fn enumerate_reduced(d: &Discriminant) -> Vec<QuadraticForm> {
    let mut out = Vec::new();
    scan_reduced(d.value(), |f| out.push(f));
    out
}

/// h(D), the number of primitive reduced forms.
pub fn class_number(d: &Discriminant) -> u64 {
    let mut h = 0;
    scan_reduced(d.value(), |_| h += 1);
    h
}

/// Some (x, y) with f(x, y) = m, if any, checking `m <= budget`.
pub fn represents_with_budget(
    f: &QuadraticForm,
    m: u64,
    budget: u64,
) -> Result<Option<(i64, i64)>> {
    if m > budget {
        return Err(Error::BudgetExceeded {
            what: "represented integer m",
            value: m,
            budget,
        });
    }
    let d = match f.discriminant() {
        Some(d) if d < 0 && f.a > 0 => d,
        _ => {
            return Err(Error::InvalidForm {
                a: f.a,
                b: f.b,
                c: f.c,
            })
        }
    };
    Ok(find_representation(f, d, m))
}

/// [`represents_with_budget`] at [`DEFAULT_REPRESENT_BUDGET`].
pub fn represents(f: &QuadraticForm, m: u64) -> Result<Option<(i64, i64)>> {
    represents_with_budget(f, m, DEFAULT_REPRESENT_BUDGET)
}

pub(crate) fn find_representation(f: &QuadraticForm, d: i64, m: u64) -> Option<(i64, i64)> {
    if m == 0 {
        return Some((0, 0));
    }
    let (a, b) = (i128::from(f.a), i128::from(f.b));
    let abs_d = i128::from(d).unsigned_abs();
    let m = i128::from(m);
    // 4a·f(x,y) = (2ax + by)² + |D|y²
    let y_max = ((4 * a * m) as u128 / abs_d).isqrt() as i128;
    for y in 0..=y_max {
        let disc = 4 * a * m - abs_d as i128 * y * y;
        if disc < 0 {
            break;
        }
        let s = (disc as u128).isqrt() as i128;
        if s * s != disc {
            continue;
        }
        for root in [s, -s] {
            let num = root - b * y;
            if num % (2 * a) == 0 {
                return Some(((num / (2 * a)) as i64, y as i64));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::{HashSet, VecDeque};

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    #[test]
    fn principal_forms() {
        assert_eq!(principal_form(-56).unwrap(), QuadraticForm::new(1, 0, 14));
        assert_eq!(principal_form(-7).unwrap(), QuadraticForm::new(1, 1, 2));
        assert_eq!(principal_form(-3).unwrap(), QuadraticForm::new(1, 1, 1));
        assert!(principal_form(-5).is_err());
        assert!(principal_form(12).is_err());
        for d in (-400..0).filter(|d: &i64| matches!(d.rem_euclid(4), 0 | 1)) {
            let f = principal_form(d).unwrap();
            assert!(f.is_reduced());
            assert_eq!(f.discriminant(), Some(d));
        }
    }

    /// Breadth-first search over words in the generators X -> X ± Y and
    /// (X, Y) -> (-Y, X), collecting every reduced form reached.
    fn reduced_forms_reachable(f: QuadraticForm, depth: usize) -> HashSet<QuadraticForm> {
        let mut seen = HashSet::from([f]);
        let mut queue = VecDeque::from([(f, 0)]);
        let mut found = HashSet::new();
        while let Some((g, k)) = queue.pop_front() {
            if g.is_reduced() {
                found.insert(g);
            }
            if k == depth {
                continue;
            }
            let QuadraticForm { a, b, c } = g;
            for h in [
                QuadraticForm::new(a, b + 2 * a, a + b + c),
                QuadraticForm::new(a, b - 2 * a, a - b + c),
                QuadraticForm::new(c, -b, a),
            ] {
                if seen.insert(h) {
                    queue.push_back((h, k + 1));
                }
            }
        }
        found
    }

    #[test]
    fn reduction_examples() {
        let f = QuadraticForm::new;
        assert_eq!(reduce(&f(1, 0, 14)).unwrap(), f(1, 0, 14));
        assert_eq!(reduce(&f(3, -2, 5)).unwrap(), f(3, -2, 5));
        assert_eq!(reduce(&f(5, 4, 3)).unwrap(), f(3, 2, 4));
        assert_eq!(
            reduced_forms_reachable(f(5, 4, 3), 8),
            HashSet::from([f(3, 2, 4)])
        );
        // boundary normalization
        assert_eq!(reduce(&f(2, -2, 3)).unwrap(), f(2, 2, 3));
        assert_eq!(reduce(&f(3, -1, 3)).unwrap(), f(3, 1, 3));
        assert!(reduce(&f(2, 0, 4)).is_err());
        assert!(reduce(&f(1, 3, 1)).is_err());
        assert!(reduce(&f(-1, 0, -1)).is_err());
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(&disc(-56)), 4);
        assert_eq!(class_number(&disc(-4)), 1);
        assert_eq!(class_number(&disc(-3)), 1);
        assert_eq!(class_number(&disc(-47)), 5);
        assert_eq!(class_number(&disc(-71)), 7);
        let f = QuadraticForm::new;
        assert_eq!(
            enumerate_reduced(&disc(-44)),
            vec![f(1, 0, 11), f(3, -2, 4), f(3, 2, 4)]
        );
        assert_eq!(
            enumerate_reduced(&disc(-56)),
            vec![f(1, 0, 14), f(2, 0, 7), f(3, -2, 5), f(3, 2, 5)]
        );
    }

    #[test]
    fn enumeration_matches_brute_force_triple_scan() {
        for d in (-500i64..0).filter(|d| matches!(d.rem_euclid(4), 0 | 1)) {
            let abs = -d;
            let mut brute = Vec::new();
            for a in 1..=abs {
                for b in -a..=a {
                    let num = b * b - d;
                    if num % (4 * a) != 0 {
                        continue;
                    }
                    let g = QuadraticForm::new(a, b, num / (4 * a));
                    if g.is_reduced() && g.is_primitive() {
                        brute.push(g);
                    }
                }
            }
            brute.sort();
            assert_eq!(enumerate_reduced(&disc(d)), brute, "D={d}");
            assert_eq!(class_number(&disc(d)), brute.len() as u64);
        }
    }

    #[test]
    fn representation_examples() {
        let f = QuadraticForm::new;
        assert_eq!(represents(&f(1, 0, 14), 15).unwrap(), Some((1, 1)));
        assert_eq!(represents(&f(1, 0, 14), 2).unwrap(), None);
        assert_eq!(represents(&f(2, 0, 7), 2).unwrap(), Some((1, 0)));
        assert_eq!(represents(&f(1, 0, 1), 3).unwrap(), None);
        assert!(matches!(
            represents(&f(1, 0, 1), DEFAULT_REPRESENT_BUDGET + 1),
            Err(Error::BudgetExceeded { .. })
        ));
        for m in 1..2000u64 {
            if let Some((x, y)) = represents(&f(3, 2, 5), m).unwrap() {
                assert_eq!(f(3, 2, 5).eval(x, y), i128::from(m));
            }
        }
    }

    #[test]
    fn represents_agrees_with_exhaustive_search() {
        let g = QuadraticForm::new(3, -2, 5);
        let mut hit = HashSet::new();
        for x in -40i64..=40 {
            for y in -40i64..=40 {
                let v = g.eval(x, y);
                if (1..=300).contains(&v) {
                    hit.insert(v as u64);
                }
            }
        }
        for m in 1..=300u64 {
            assert_eq!(
                represents(&g, m).unwrap().is_some(),
                hit.contains(&m),
                "m={m}"
            );
        }
    }

    fn primitive_definite() -> impl Strategy<Value = QuadraticForm> {
        (1i64..60, -120i64..120, 1i64..60)
            .prop_map(|(a, b, c)| QuadraticForm::new(a, b, c))
            .prop_filter("primitive positive definite", |f| {
                f.is_primitive() && f.is_positive_definite()
            })
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent_and_preserves_invariants(f in primitive_definite()) {
            let r = reduce(&f).unwrap();
            prop_assert!(r.is_reduced());
            prop_assert!(r.is_primitive());
            prop_assert_eq!(r.discriminant(), f.discriminant());
            prop_assert_eq!(reduce(&r).unwrap(), r);
            let classes = enumerate_reduced(&disc(f.discriminant().unwrap()));
            prop_assert!(classes.contains(&r));
        }

        #[test]
        fn reduction_preserves_represented_integers(f in primitive_definite(), m in 1u64..=500) {
            let r = reduce(&f).unwrap();
            prop_assert_eq!(
                represents(&f, m).unwrap().is_some(),
                represents(&r, m).unwrap().is_some()
            );
        }
    }
}

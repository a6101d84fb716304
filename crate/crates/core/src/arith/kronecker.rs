// SPDX-License-Identifier: Apache-2.0

//! Kronecker symbol (a/n), extended to all integer pairs.

/// Jacobi symbol (a/n) for odd n > 0, with a already reduced below n.
fn jacobi_reduced(mut a: u64, mut n: u64) -> i32 {
    debug_assert!(n & 1 == 1);
    let mut sign = 1;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz & 1 == 1 && matches!(n & 7, 3 | 5) {
            sign = -sign;
        }
        if a & 3 == 3 && n & 3 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// The Kronecker symbol (a/n).
///
/// Total on `i64 x i64`: (a/0) is 1 for a = ±1 and 0 otherwise, (a/-1) is the
/// sign of a, and (a/2) is 0 for even a, 1 for a ≡ ±1 and -1 for a ≡ ±3 mod 8.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return i32::from(a == 1 || a == -1);
    }
    let mut sign = 1;
    if n < 0 && a < 0 {
        sign = -1;
    }
    let mut m = n.unsigned_abs();
    let twos = m.trailing_zeros();
    if twos > 0 {
        if a & 1 == 0 {
            return 0;
        }
        if twos & 1 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
        m >>= twos;
    }
    let reduced = (i128::from(a)).rem_euclid(i128::from(m)) as u64;
    sign * jacobi_reduced(reduced, m)
}

/// Values of χ_D(n) for n in 0..|D|, for a fundamental discriminant D.
///
/// χ_D is a primitive character mod |D| when D is fundamental, so a single
/// period answers every query.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    modulus: u64,
    values: Vec<i8>,
}

impl CharacterTable {
    pub fn new(d: i64) -> Self {
        let modulus = d.unsigned_abs();
        let values = (0..modulus).map(|n| kronecker(d, n as i64) as i8).collect();
        CharacterTable { modulus, values }
    }

    #[inline]
    pub fn get(&self, n: u64) -> i32 {
        i32::from(self.values[(n % self.modulus) as usize])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Exact censuses of the integers represented by a form, by lattice-point
//! enumeration into a bit array, and comparison against the two asymptotic
//! predictions C x/sqrt(ln x) and C ∫_2^x dt/sqrt(ln t).

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::arith::Discriminant;
use crate::constants::{bernays_constant, ConstantOptions};
use crate::error::{Error, Result};
use crate::forms::{genus_partition, principal_form, QuadraticForm};
use crate::numeric::adaptive_simpson;

/// Largest supported census cutoff.
pub const MAX_CUTOFF: u64 = 1_000_000_000;

/// Default memory budget for a single bit array, in bytes.
pub const DEFAULT_MEMORY_BUDGET: u64 = 512 << 20;

/// Environment variable overriding [`DEFAULT_MEMORY_BUDGET`].
pub const MEMORY_BUDGET_ENV: &str = "BERNAYS_MEMORY_BUDGET";

/// Bits per segment in segmented counting.
pub const SEGMENT_BITS: u64 = 1 << 26;

/// Largest cutoff for [`odd_identity_check`].
pub const ODD_IDENTITY_LIMIT: u64 = 100_000_000;

static BUDGET_OVERRIDE: AtomicU64 = AtomicU64::new(0);

/// Process-wide memory budget in bytes, taking precedence over the environment.
/// `None` restores the environment/default lookup.
pub fn set_memory_budget(bytes: Option<u64>) {
    BUDGET_OVERRIDE.store(bytes.unwrap_or(0), Ordering::Relaxed);
}

pub fn memory_budget() -> u64 {
    let forced = BUDGET_OVERRIDE.load(Ordering::Relaxed);
    if forced != 0 {
        return forced;
    }
    std::env::var(MEMORY_BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MEMORY_BUDGET)
}

/// A bit array indexed by integers 0..len.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bits {
    words: Vec<u64>,
    len: u64,
}

impl Bits {
    pub fn new(len: u64) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64) as usize],
            len,
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn set(&mut self, i: u64) {
        self.words[(i >> 6) as usize] |= 1 << (i & 63);
    }

    #[inline]
    pub fn get(&self, i: u64) -> bool {
        i < self.len && self.words[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Set bits with index < `end`.
    pub fn count_below(&self, end: u64) -> u64 {
        let end = end.min(self.len);
        let full = (end >> 6) as usize;
        let mut n: u64 = self.words[..full]
            .iter()
            .map(|w| u64::from(w.count_ones()))
            .sum();
        let rem = end & 63;
        if rem > 0 {
            n += u64::from((self.words[full] & ((1u64 << rem) - 1)).count_ones());
        }
        n
    }

    pub fn count_and(&self, other: &Bits) -> u64 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| u64::from((a & b).count_ones()))
            .sum()
    }

    pub fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros();
                w &= w - 1;
                Some(wi as u64 * 64 + u64::from(tz))
            })
        })
    }
}

/// Bit m set iff some (X, Y) ≠ (0, 0) has f(X, Y) = m, for 1 ≤ m ≤ x.
#[derive(Debug, Clone)]
pub struct RepresentedSet {
    pub form: QuadraticForm,
    pub x: u64,
    pub bits: Bits,
}

impl RepresentedSet {
    pub fn contains(&self, m: u64) -> bool {
        m <= self.x && self.bits.get(m)
    }

    /// B_f(x).
    pub fn count(&self) -> u64 {
        self.bits.count_ones()
    }

    /// B_f(y) for y ≤ x.
    pub fn count_up_to(&self, y: u64) -> u64 {
        self.bits.count_below(y.min(self.x) + 1)
    }

    /// Represented m ≤ x with gcd(m, D) = 1.
    pub fn count_coprime(&self, abs_d: u64) -> u64 {
        self.bits.count_and(&coprime_mask(abs_d, self.x + 1))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Bits 0..len set at indices coprime to `modulus`.
pub fn coprime_mask(modulus: u64, len: u64) -> Bits {
    let mut bits = Bits::new(len);
    if modulus <= 10_000_000 {
        let unit: Vec<bool> = (0..modulus).map(|r| gcd(r, modulus) == 1).collect();
        let mut r = 0usize;
        for i in 0..len {
            if unit[r] {
                bits.set(i);
            }
            r += 1;
            if r as u64 == modulus {
                r = 0;
            }
        }
    } else {
        for i in 0..len {
            if gcd(i, modulus) == 1 {
                bits.set(i);
            }
        }
    }
    bits
}

fn check_form(f: &QuadraticForm) -> Result<i64> {
    match f.discriminant() {
        Some(d) if d < 0 && f.a > 0 && f.is_primitive() => Ok(d),
        _ => Err(Error::InvalidForm {
            a: f.a,
            b: f.b,
            c: f.c,
        }),
    }
}

fn check_cutoff(x: u64) -> Result<()> {
    if x == 0 {
        return Err(Error::InvalidArgument(
            "census cutoff must be positive".into(),
        ));
    }
    if x > MAX_CUTOFF {
        return Err(Error::BudgetExceeded {
            what: "census cutoff",
            value: x,
            budget: MAX_CUTOFF,
        });
    }
    Ok(())
}

/// The X with f(X, y) ≤ bound, as an inclusive range, if any.
fn x_range(f: &QuadraticForm, abs_d: i128, y: i64, bound: i64) -> Option<(i64, i64)> {
    // 4a f(X, y) = (2aX + by)² + |D| y²
    let (a, b) = (i128::from(f.a), i128::from(f.b));
    let disc = 4 * a * i128::from(bound) - abs_d * i128::from(y) * i128::from(y);
    if disc < 0 {
        return None;
    }
    let root = (disc as f64).sqrt();
    let centre = -(b as f64) * y as f64;
    let two_a = 2.0 * a as f64;
    let mut lo = ((centre - root) / two_a).ceil() as i64;
    let mut hi = ((centre + root) / two_a).floor() as i64;
    let within = |x: i64| f.eval(x, y) <= i128::from(bound);
    while within(lo - 1) {
        lo -= 1;
    }
    while lo <= hi && !within(lo) {
        lo += 1;
    }
    while within(hi + 1) {
        hi += 1;
    }
    while hi >= lo && !within(hi) {
        hi -= 1;
    }
    (lo <= hi).then_some((lo, hi))
}

/// Visits f(X, Y) for every lattice point with 0 < f(X, Y) ≤ bound, one of
/// each ± pair: Y > 0 with all X, plus Y = 0 with X > 0. Values are
/// passed to `visit(y, x_lo, x_hi)` as ranges of X per row.
fn for_each_row<F: FnMut(i64, i64, i64)>(f: &QuadraticForm, d: i64, bound: u64, mut visit: F) {
    let abs_d = i128::from(d).abs();
    let bound = bound as i64;
    let y_max = ((4 * i128::from(f.a) * i128::from(bound) / abs_d) as u128).isqrt() as i64;
    for y in 0..=y_max {
        if let Some((lo, hi)) = x_range(f, abs_d, y, bound) {
            let lo = if y == 0 { lo.max(1) } else { lo };
            if lo <= hi {
                visit(y, lo, hi);
            }
        }
    }
}

/// Marks f(X, y) for X in lo..=hi, stepping the value incrementally.
#[inline]
fn mark_row(f: &QuadraticForm, y: i64, lo: i64, hi: i64, offset: u64, bits: &mut Bits) {
    let mut v = f.eval(lo, y) as i64;
    // f(X+1, y) - f(X, y) = a(2X + 1) + b y
    let mut step = f.a * (2 * lo + 1) + f.b * y;
    let two_a = 2 * f.a;
    for _ in lo..=hi {
        bits.set(v as u64 - offset);
        v += step;
        step += two_a;
    }
}

/// The set of m ≤ x represented by f, as a bit array over [0, x].
pub fn sieve_representable(f: &QuadraticForm, x: u64) -> Result<RepresentedSet> {
    sieve_representable_with_budget(f, x, memory_budget())
}

pub fn sieve_representable_with_budget(
    f: &QuadraticForm,
    x: u64,
    budget: u64,
) -> Result<RepresentedSet> {
    let d = check_form(f)?;
    check_cutoff(x)?;
    let bytes = (x + 1).div_ceil(8);
    if bytes > budget {
        return Err(Error::BudgetExceeded {
            what: "census bit array bytes",
            value: bytes,
            budget,
        });
    }
    let mut bits = Bits::new(x + 1);
    for_each_row(f, d, x, |y, lo, hi| mark_row(f, y, lo, hi, 0, &mut bits));
    Ok(RepresentedSet { form: *f, x, bits })
}

/// (B_f(x), B'_f(x)) counted segment by segment, re-enumerating the lattice
/// strip for each window of `segment_bits` values. Memory stays at one
/// segment regardless of x.
pub fn count_representable_segmented(
    f: &QuadraticForm,
    x: u64,
    segment_bits: u64,
) -> Result<(u64, u64)> {
    let d = check_form(f)?;
    check_cutoff(x)?;
    if segment_bits == 0 {
        return Err(Error::InvalidArgument(
            "segment size must be positive".into(),
        ));
    }
    let abs_d = d.unsigned_abs();
    let abs_d_wide = i128::from(abs_d);
    let (mut total, mut coprime) = (0, 0);
    let mut lo = 1u64;
    while lo <= x {
        let hi = (lo + segment_bits - 1).min(x);
        let mut bits = Bits::new(hi - lo + 1);
        for_each_row(f, d, hi, |y, xlo, xhi| {
            // drop the inner run where f < lo
            match x_range(f, abs_d_wide, y, lo as i64 - 1) {
                Some((ilo, ihi)) => {
                    let ilo = ilo.max(xlo);
                    let ihi = ihi.min(xhi);
                    if xlo < ilo {
                        mark_row(f, y, xlo, ilo - 1, lo, &mut bits);
                    }
                    if ihi < xhi {
                        mark_row(f, y, ihi + 1, xhi, lo, &mut bits);
                    }
                }
                None => mark_row(f, y, xlo, xhi, lo, &mut bits),
            }
        });
        total += bits.count_ones();
        coprime += bits
            .iter_ones()
            .filter(|&i| gcd(lo + i, abs_d) == 1)
            .count() as u64;
        lo = hi + 1;
    }
    Ok((total, coprime))
}

/// ∫_2^x dt / sqrt(ln t), computed as ∫_{ln 2}^{ln x} e^u / sqrt(u) du.
pub fn ramanujan_integral(x: f64) -> f64 {
    if x <= 2.0 {
        return 0.0;
    }
    adaptive_simpson(
        |u| u.exp() / u.sqrt(),
        std::f64::consts::LN_2,
        x.ln(),
        1e-10,
    )
}

/// x / sqrt(ln x).
pub fn landau_main_term(x: f64) -> f64 {
    x / x.ln().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub form: QuadraticForm,
    #[serde(rename = "D")]
    pub discriminant: i64,
    pub x: u64,
    pub count: u64,
    pub count_coprime: u64,
    pub landau_pred: f64,
    pub integral_pred: f64,
    pub c_used: f64,
}

pub const CENSUS_CSV_HEADER: &str = "D,a,b,c,x,count,count_coprime,landau_pred,integral_pred";

impl CensusRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.9},{:.9}",
            self.discriminant,
            self.form.a,
            self.form.b,
            self.form.c,
            self.x,
            self.count,
            self.count_coprime,
            self.landau_pred,
            self.integral_pred
        )
    }
}

/// Census of f up to x against the constant `c`. Falls back to segmented
/// counting when the bit array would exceed the memory budget.
pub fn census(f: &QuadraticForm, x: u64, c: f64) -> Result<CensusRecord> {
    if x < 3 {
        return Err(Error::InvalidArgument(format!(
            "census needs x >= 3, got {x}"
        )));
    }
    let d = check_form(f)?;
    check_cutoff(x)?;
    let (count, count_coprime) = if (x + 1).div_ceil(8) <= memory_budget() {
        let set = sieve_representable(f, x)?;
        (set.count(), set.count_coprime(d.unsigned_abs()))
    } else {
        count_representable_segmented(f, x, SEGMENT_BITS)?
    };
    let xf = x as f64;
    Ok(CensusRecord {
        form: *f,
        discriminant: d,
        x,
        count,
        count_coprime,
        landau_pred: c * landau_main_term(xf),
        integral_pred: c * ramanujan_integral(xf),
        c_used: c,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenusCensus {
    #[serde(rename = "D")]
    pub discriminant: i64,
    pub x: u64,
    /// Per genus: m ≤ x coprime to D represented by some class of the genus.
    pub genus_counts: Vec<u64>,
    /// B'_D(x): m ≤ x coprime to D represented by any class.
    pub total: u64,
    /// Coprime m represented by two or more genera.
    pub overlaps: u64,
}

impl GenusCensus {
    pub fn shares(&self) -> Vec<f64> {
        self.genus_counts
            .iter()
            .map(|&n| n as f64 / self.total.max(1) as f64)
            .collect()
    }
}

/// Coprime census split by genus.
pub fn census_by_genus(d: &Discriminant, x: u64) -> Result<GenusCensus> {
    check_cutoff(x)?;
    let partition = genus_partition(d)?;
    let bytes = (x + 1).div_ceil(8) * (partition.genus_count() as u64 + 3);
    let budget = memory_budget();
    if bytes > budget {
        return Err(Error::BudgetExceeded {
            what: "genus census bytes",
            value: bytes,
            budget,
        });
    }
    let mask = coprime_mask(d.abs(), x + 1);
    let mut union = Bits::new(x + 1);
    let mut seen_twice = Bits::new(x + 1);
    let mut genus_counts = Vec::with_capacity(partition.genus_count());
    for g in 0..partition.genus_count() {
        let mut genus_bits = Bits::new(x + 1);
        for f in partition.genus_forms(g) {
            genus_bits.or_assign(&sieve_representable(f, x)?.bits);
        }
        genus_bits.and_assign(&mask);
        genus_counts.push(genus_bits.count_ones());
        let mut both = genus_bits.clone();
        both.and_assign(&union);
        seen_twice.or_assign(&both);
        union.or_assign(&genus_bits);
    }
    Ok(GenusCensus {
        discriminant: d.value(),
        x,
        genus_counts,
        total: union.count_ones(),
        overlaps: seen_twice.count_ones(),
    })
}

/// B(x) = Σ_{j ≥ 0} Od(x / 2^j) for sums of two squares, where Od(y) counts
/// odd m ≤ y that are sums of two squares.
pub fn odd_identity_check(x: u64) -> Result<bool> {
    if x > ODD_IDENTITY_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "odd-identity cutoff",
            value: x,
            budget: ODD_IDENTITY_LIMIT,
        });
    }
    let set = sieve_representable(&QuadraticForm::new(1, 0, 1), x)?;
    let mut odd_prefix = vec![0u64; x as usize + 1];
    for m in 1..=x {
        odd_prefix[m as usize] =
            odd_prefix[m as usize - 1] + u64::from(m & 1 == 1 && set.contains(m));
    }
    let mut sum = 0;
    let mut y = x;
    while y > 0 {
        sum += odd_prefix[y as usize];
        y /= 2;
    }
    Ok(sum == set.count())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub x: u64,
    pub count: u64,
    pub landau_error: f64,
    pub integral_error: f64,
}

/// |B - prediction| for both predictions at each cutoff, for the principal
/// form of D, using C(D) from `opts`.
pub fn compare_approximations(
    d: &Discriminant,
    xs: &[u64],
    opts: &ConstantOptions,
) -> Result<Vec<ComparisonRow>> {
    let c = bernays_constant(d, opts)?.c_d.value;
    compare_with_constant(d, xs, c)
}

pub fn compare_with_constant(d: &Discriminant, xs: &[u64], c: f64) -> Result<Vec<ComparisonRow>> {
    let f = principal_form(d.value())?;
    let Some(&top) = xs.iter().max() else {
        return Ok(Vec::new());
    };
    if let Some(&small) = xs.iter().find(|&&x| x < 3) {
        return Err(Error::InvalidArgument(format!(
            "cutoffs must be >= 3, got {small}"
        )));
    }
    let set = sieve_representable(&f, top)?;
    Ok(xs
        .iter()
        .map(|&x| {
            let count = set.count_up_to(x);
            let xf = x as f64;
            ComparisonRow {
                x,
                count,
                landau_error: (count as f64 - c * landau_main_term(xf)).abs(),
                integral_error: (count as f64 - c * ramanujan_integral(xf)).abs(),
            }
        })
        .collect())
}

/// (y, B(y) sqrt(ln y) / y) at `points` geometrically spaced y up to x, for plotting.
pub fn convergence_series(set: &RepresentedSet, points: usize) -> Vec<(u64, f64)> {
    let lo = 10f64.min(set.x as f64).ln();
    let hi = (set.x as f64).ln();
    let mut out: Vec<(u64, f64)> = (0..points.max(2))
        .map(|i| {
            let t = i as f64 / (points.max(2) - 1) as f64;
            (lo + t * (hi - lo)).exp().round() as u64
        })
        .filter(|&y| y >= 3)
        .map(|y| {
            let yf = y as f64;
            (y, set.count_up_to(y) as f64 * yf.ln().sqrt() / yf)
        })
        .collect();
    out.dedup_by_key(|p| p.0);
    out
}

// SPDX-License-Identifier: Apache-2.0

//! Scans primes q in an arithmetic progression for large C(-q) or C(-4q),
//! and reports the size of L(1, χ_D) against classical bounds.
//!
//! Ranking runs at a cheap prime bound; only the survivors are recomputed
//! at full precision.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, Discriminant};
use crate::constants::table::C_MINUS_8;
use crate::constants::{bernays_constant_with_class_number, ConstantOptions, DEFAULT_PRIME_BOUND};
use crate::error::{Error, Result};
use crate::forms::class_number;
use crate::lfunc::l_one_from_class_number;

/// Prime bound for the ranking pass.
pub const DEFAULT_RANK_BOUND: u64 = 100_000;

/// Largest scan limit.
pub const MAX_SCAN_LIMIT: u64 = 1_000_000_000;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Candidates evaluated between checkpoints.
const CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// D = -q (fundamental for q ≡ 3 mod 4).
    MinusQ,
    /// D = -4q (fundamental for q ≡ 1 mod 4 and q = 2).
    MinusFourQ,
}

impl Family {
    pub fn discriminant(self, q: u64) -> i64 {
        match self {
            Family::MinusQ => -(q as i64),
            Family::MinusFourQ => -4 * q as i64,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::MinusQ => "minus-q",
            Family::MinusFourQ => "minus-4q",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus-q" | "-q" => Ok(Family::MinusQ),
            "minus-4q" | "-4q" => Ok(Family::MinusFourQ),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub modulus: u64,
    pub residue: u64,
    pub limit: u64,
    pub top_n: usize,
    pub family: Family,
    pub rank_bound: u64,
    pub refine_bound: u64,
}

impl SearchConfig {
    pub fn new(modulus: u64, residue: u64, limit: u64, top_n: usize) -> Self {
        SearchConfig {
            modulus,
            residue,
            limit,
            top_n,
            family: Family::MinusQ,
            rank_bound: DEFAULT_RANK_BOUND,
            refine_bound: DEFAULT_PRIME_BOUND,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.modulus == 0 || self.residue >= self.modulus {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= residue < modulus, got {} mod {}",
                self.residue, self.modulus
            )));
        }
        if gcd(self.residue, self.modulus) != 1 && !is_prime(self.residue) {
            return Err(Error::InvalidArgument(format!(
                "progression {} mod {} contains no primes beyond {}",
                self.residue, self.modulus, self.residue
            )));
        }
        if self.limit > MAX_SCAN_LIMIT {
            return Err(Error::BudgetExceeded {
                what: "scan limit",
                value: self.limit,
                budget: MAX_SCAN_LIMIT,
            });
        }
        Ok(())
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchEntry {
    pub q: u64,
    #[serde(rename = "D")]
    pub discriminant: i64,
    pub h: u64,
    pub l_one: f64,
    /// C(D) at the ranking bound.
    pub c_rank: f64,
    pub c_rank_err: f64,
    /// C(D) at the refinement bound (equal to the ranking value until refined).
    pub c: f64,
    pub c_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub modulus: u64,
    pub residue: u64,
    pub family: Family,
    pub limit: u64,
    /// Sorted by C descending, ties by q ascending.
    pub top: Vec<SearchEntry>,
    /// Number of scanned q with C > C(-8).
    pub exceed_count: u64,
    /// Running maxima (q, C at the ranking bound) in scan order.
    pub records: Vec<(u64, f64)>,
    /// Number of primes evaluated.
    pub scanned: u64,
}

pub const SEARCH_CSV_HEADER: &str = "q,D,h,L1,C,err";

impl SearchResult {
    pub fn csv_rows(&self) -> Vec<String> {
        self.top
            .iter()
            .map(|e| {
                format!(
                    "{},{},{},{:.9},{:.9},{:.3e}",
                    e.q, e.discriminant, e.h, e.l_one, e.c, e.c_err
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
struct ScanState {
    next_q: u64,
    scanned: u64,
    exceed_count: u64,
    top: Vec<SearchEntry>,
    records: Vec<(u64, f64)>,
}

fn rank_order(a: &SearchEntry, b: &SearchEntry) -> std::cmp::Ordering {
    b.c.total_cmp(&a.c).then(a.q.cmp(&b.q))
}

fn evaluate(q: u64, family: Family, rank_bound: u64) -> Result<Option<SearchEntry>> {
    if !is_prime(q) {
        return Ok(None);
    }
    let d = match Discriminant::new(family.discriminant(q)) {
        Ok(d) if d.is_fundamental() => d,
        _ => return Ok(None),
    };
    let h = class_number(&d);
    let report = bernays_constant_with_class_number(&d, h, &ConstantOptions::direct(rank_bound))?;
    Ok(Some(SearchEntry {
        q,
        discriminant: d.value(),
        h,
        l_one: report.l_one.value,
        c_rank: report.c_d.value,
        c_rank_err: report.c_d.abs_error,
        c: report.c_d.value,
        c_err: report.c_d.abs_error,
    }))
}

fn first_candidate(cfg: &SearchConfig) -> u64 {
    cfg.residue
}

/// Scan the progression and refine the best `top_n` at `refine_bound`.
pub fn scan(cfg: &SearchConfig) -> Result<SearchResult> {
    scan_with_checkpoint(cfg, None)
}

/// As [`scan`], writing a checkpoint after every chunk and resuming from it
/// when the file already exists.
pub fn scan_with_checkpoint(cfg: &SearchConfig, checkpoint: Option<&Path>) -> Result<SearchResult> {
    cfg.validate()?;
    let mut state = match checkpoint {
        Some(path) if path.exists() => read_checkpoint(path, cfg)?,
        _ => ScanState {
            next_q: first_candidate(cfg),
            scanned: 0,
            exceed_count: 0,
            top: Vec::new(),
            records: Vec::new(),
        },
    };

    while state.next_q <= cfg.limit {
        let candidates: Vec<u64> = (0..CHUNK as u64)
            .map(|i| state.next_q + i * cfg.modulus)
            .take_while(|&q| q <= cfg.limit)
            .collect();
        let last = *candidates.last().expect("nonempty chunk");
        let evaluated: Vec<SearchEntry> = candidates
            .par_iter()
            .map(|&q| evaluate(q, cfg.family, cfg.rank_bound))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        for e in evaluated {
            state.scanned += 1;
            if e.c_rank > C_MINUS_8 {
                state.exceed_count += 1;
            }
            if state
                .records
                .last()
                .is_none_or(|&(_, best)| e.c_rank > best)
            {
                state.records.push((e.q, e.c_rank));
            }
            state.top.push(e);
        }
        state.top.sort_by(rank_order);
        state.top.truncate(cfg.top_n);
        state.next_q = last + cfg.modulus;
        if let Some(path) = checkpoint {
            write_checkpoint(path, cfg, &state)?;
        }
    }

    let mut top: Vec<SearchEntry> = state
        .top
        .into_par_iter()
        .map(|mut e| -> Result<SearchEntry> {
            if cfg.refine_bound != cfg.rank_bound {
                let d = Discriminant::fundamental(e.discriminant)?;
                let r = bernays_constant_with_class_number(
                    &d,
                    e.h,
                    &ConstantOptions::direct(cfg.refine_bound),
                )?;
                e.c = r.c_d.value;
                e.c_err = r.c_d.abs_error;
            }
            Ok(e)
        })
        .collect::<Result<_>>()?;
    top.sort_by(rank_order);

    Ok(SearchResult {
        modulus: cfg.modulus,
        residue: cfg.residue,
        family: cfg.family,
        limit: cfg.limit,
        top,
        exceed_count: state.exceed_count,
        records: state.records,
        scanned: state.scanned,
    })
}

const CHECKPOINT_MAGIC: &str = "bernays-search-checkpoint v1";

fn write_checkpoint(path: &Path, cfg: &SearchConfig, st: &ScanState) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut out = std::io::BufWriter::new(fs::File::create(&tmp)?);
        writeln!(out, "{CHECKPOINT_MAGIC}")?;
        writeln!(out, "family {}", cfg.family)?;
        writeln!(out, "modulus {}", cfg.modulus)?;
        writeln!(out, "residue {}", cfg.residue)?;
        writeln!(out, "rank_bound {}", cfg.rank_bound)?;
        writeln!(out, "next_q {}", st.next_q)?;
        writeln!(out, "scanned {}", st.scanned)?;
        writeln!(out, "exceed_count {}", st.exceed_count)?;
        for (q, c) in &st.records {
            writeln!(out, "record {q} {c}")?;
        }
        for e in &st.top {
            writeln!(
                out,
                "top {} {} {} {} {}",
                e.q, e.h, e.l_one, e.c_rank, e.c_rank_err
            )?;
        }
        out.flush()?;
    }
    fs::rename(tmp, path)?;
    Ok(())
}

fn read_checkpoint(path: &Path, cfg: &SearchConfig) -> Result<ScanState> {
    let text = fs::read_to_string(path)?;
    let bad = |msg: &str| Error::Checkpoint(format!("{}: {msg}", path.display()));
    let mut lines = text.lines();
    if lines.next() != Some(CHECKPOINT_MAGIC) {
        return Err(bad("missing header"));
    }
    let mut st = ScanState {
        next_q: 0,
        scanned: 0,
        exceed_count: 0,
        top: Vec::new(),
        records: Vec::new(),
    };
    let mut next_q = None;
    for line in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |i: usize| -> Result<u64> {
            fields
                .get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(line))
        };
        let real = |i: usize| -> Result<f64> {
            fields
                .get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(line))
        };
        match fields.first().copied() {
            Some("family") => {
                if fields.get(1).copied() != Some(cfg.family.to_string().as_str()) {
                    return Err(bad("family differs from the requested scan"));
                }
            }
            Some("modulus") if num(1)? != cfg.modulus => return Err(bad("modulus differs")),
            Some("residue") if num(1)? != cfg.residue => return Err(bad("residue differs")),
            Some("rank_bound") if num(1)? != cfg.rank_bound => {
                return Err(bad("rank bound differs"))
            }
            Some("modulus" | "residue" | "rank_bound") => {}
            Some("next_q") => next_q = Some(num(1)?),
            Some("scanned") => st.scanned = num(1)?,
            Some("exceed_count") => st.exceed_count = num(1)?,
            Some("record") => st.records.push((num(1)?, real(2)?)),
            Some("top") => {
                let q = num(1)?;
                let (c, err) = (real(4)?, real(5)?);
                st.top.push(SearchEntry {
                    q,
                    discriminant: cfg.family.discriminant(q),
                    h: num(2)?,
                    l_one: real(3)?,
                    c_rank: c,
                    c_rank_err: err,
                    c,
                    c_err: err,
                });
            }
            None => {}
            Some(_) => return Err(bad(line)),
        }
    }
    st.next_q = next_q.ok_or_else(|| bad("missing next_q"))?;
    st.top.sort_by(rank_order);
    st.top.truncate(cfg.top_n);
    Ok(st)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    #[serde(rename = "D")]
    pub discriminant: i64,
    pub l_one: f64,
    /// (10/3)(φ(|D|)/|D|) ln|D| + 1, an unconditional upper bound for L(1, χ_D).
    pub bec_bound: f64,
    /// L(1, χ_D) / ln ln |D|.
    pub loglog_ratio: f64,
    /// loglog_ratio / e^γ; context only, the lim sup statements are asymptotic.
    pub ratio_over_exp_gamma: f64,
}

impl Diagnostics {
    pub fn bec_holds(&self) -> bool {
        self.l_one < self.bec_bound
    }
}

/// L(1, χ_D) size diagnostics from a known class number.
pub fn l_diagnostics_with_class_number(d: &Discriminant, h: u64) -> Result<Diagnostics> {
    if d.abs() < 3 {
        return Err(Error::InvalidDiscriminant(d.value()));
    }
    let l = l_one_from_class_number(d, h)?.value;
    let abs = d.abs() as f64;
    let bec_bound = 10.0 / 3.0 * (d.phi() as f64 / abs) * abs.ln() + 1.0;
    let loglog_ratio = l / abs.ln().ln();
    Ok(Diagnostics {
        discriminant: d.value(),
        l_one: l,
        bec_bound,
        loglog_ratio,
        ratio_over_exp_gamma: loglog_ratio / EULER_GAMMA.exp(),
    })
}

pub fn l_diagnostics(d: &Discriminant) -> Result<Diagnostics> {
    l_diagnostics_with_class_number(d, class_number(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(modulus: u64, residue: u64, limit: u64, top_n: usize) -> SearchConfig {
        SearchConfig {
            refine_bound: 10_000_000,
            ..SearchConfig::new(modulus, residue, limit, top_n)
        }
    }

    #[test]
    fn small_primes_beating_minus_8() {
        // below 300 exactly seven primes q ≡ 3 (mod 4) beat C(-8); 263 and 271 push 47 out of a top five
        let r = scan(&quick(4, 3, 300, 7)).unwrap();
        let mut qs: Vec<u64> = r.top.iter().map(|e| e.q).collect();
        qs.sort_unstable();
        assert_eq!(qs, vec![47, 71, 167, 191, 239, 263, 271]);
        assert!(r.top.iter().all(|e| e.c > C_MINUS_8));
        assert!(r.top.windows(2).all(|w| w[0].c >= w[1].c));
        assert_eq!(r.exceed_count, 7);
        assert_eq!(r.records.first().unwrap().0, 3);
        assert_eq!(r.records.last().unwrap().0, 239);

        let five = scan(&quick(4, 3, 300, 5)).unwrap();
        let qs: Vec<u64> = five.top.iter().map(|e| e.q).collect();
        assert_eq!(qs, vec![239, 191, 167, 71, 263]);
    }

    #[test]
    fn entries_respect_progression() {
        let r = scan(&quick(8, 7, 2000, 50)).unwrap();
        for e in &r.top {
            assert!(is_prime(e.q) && e.q % 8 == 7);
            assert_eq!(e.discriminant, -(e.q as i64));
        }
        let r = scan(&SearchConfig {
            family: Family::MinusFourQ,
            ..quick(4, 1, 500, 10)
        })
        .unwrap();
        for e in &r.top {
            assert!(is_prime(e.q) && e.q % 4 == 1);
            assert_eq!(e.discriminant, -4 * e.q as i64);
        }
    }

    #[test]
    fn empty_and_invalid_ranges() {
        let r = scan(&quick(4, 3, 2, 5)).unwrap();
        assert!(r.top.is_empty());
        assert_eq!((r.exceed_count, r.scanned), (0, 0));
        assert!(scan(&quick(4, 4, 100, 5)).is_err());
        assert!(scan(&quick(4, 2, 100, 5)).is_ok()); // only q = 2, which gives no -q discriminant
        assert!(scan(&quick(6, 4, 100, 5)).is_err());
        assert!(matches!(
            scan(&quick(4, 3, MAX_SCAN_LIMIT + 1, 5)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn refinement_only_swaps_within_bounds() {
        let r = scan(&quick(4, 3, 3000, 12)).unwrap();
        let mut by_rank = r.top.clone();
        by_rank.sort_by(|a, b| b.c_rank.total_cmp(&a.c_rank).then(a.q.cmp(&b.q)));
        for (i, (a, b)) in by_rank.iter().zip(&r.top).enumerate() {
            if a.q != b.q {
                // a reordering is only allowed between values the ranking could not separate
                assert!(
                    (a.c_rank - b.c_rank).abs() <= a.c_rank_err + b.c_rank_err,
                    "position {i}"
                );
            }
            assert!((a.c - a.c_rank).abs() <= a.c_err + a.c_rank_err);
        }
    }

    #[test]
    fn checkpoint_resume_matches_uninterrupted_scan() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.ckpt");
        let cfg = quick(4, 3, 12_000, 6);
        let whole = scan(&cfg).unwrap();

        // stop after the first chunk, then resume
        let partial = SearchConfig {
            limit: 3 + 4 * (CHUNK as u64 - 1),
            ..cfg.clone()
        };
        scan_with_checkpoint(&partial, Some(&path)).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(CHECKPOINT_MAGIC));
        let resumed = scan_with_checkpoint(&cfg, Some(&path)).unwrap();
        assert_eq!(resumed, whole);

        let other = SearchConfig { residue: 1, ..cfg };
        assert!(matches!(
            scan_with_checkpoint(&other, Some(&path)),
            Err(Error::Checkpoint(_))
        ));
    }

    #[test]
    fn diagnostics() {
        let d = Discriminant::fundamental(-4).unwrap();
        let g = l_diagnostics(&d).unwrap();
        assert!((g.bec_bound - (10.0 / 3.0 * 0.5 * 4f64.ln() + 1.0)).abs() < 1e-12);
        assert!((g.bec_bound - 3.310).abs() < 1e-3);
        assert!(g.bec_holds());
        for dv in crate::arith::fundamental_discriminants(-3000, -3) {
            assert!(
                l_diagnostics(&Discriminant::fundamental(dv).unwrap())
                    .unwrap()
                    .bec_holds(),
                "D={dv}"
            );
        }
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Genus partition of the reduced classes of a fundamental discriminant.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{enumerate_reduced, find_representation, gcd, QuadraticForm, DEFAULT_REPRESENT_BUDGET};
use crate::arith::{kronecker, Discriminant};
use crate::error::{Error, Result};

/// Largest |D| for [`genus_partition_residue_oracle`].
pub const RESIDUE_ORACLE_LIMIT: u64 = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusPartition {
    pub discriminant: Discriminant,
    /// Reduced forms in (a, b, c) order.
    pub classes: Vec<QuadraticForm>,
    /// Indices into `classes`; each genus ascending, genera ordered by
    /// their first class, so the principal genus comes first.
    pub genera: Vec<Vec<usize>>,
    /// Prime discriminants whose Kronecker characters separate the genera.
    /// Empty for the residue oracle.
    pub character_labels: Vec<i64>,
}

impl GenusPartition {
    pub fn genus_count(&self) -> usize {
        self.genera.len()
    }

    pub fn genus_forms(&self, g: usize) -> impl Iterator<Item = &QuadraticForm> {
        self.genera[g].iter().map(move |&i| &self.classes[i])
    }

    /// Index of the genus holding class `class`.
    pub fn genus_of(&self, class: usize) -> usize {
        self.genera
            .iter()
            .position(|g| g.contains(&class))
            .expect("genera cover every class")
    }

    /// g(m, D): how many genera contain a class representing m.
    pub fn genera_representing(&self, m: u64) -> Result<u32> {
        self.genera_representing_with_budget(m, DEFAULT_REPRESENT_BUDGET)
    }

    pub fn genera_representing_with_budget(&self, m: u64, budget: u64) -> Result<u32> {
        if m > budget {
            return Err(Error::BudgetExceeded {
                what: "represented integer m",
                value: m,
                budget,
            });
        }
        let d = self.discriminant.value();
        let count = self
            .genera
            .iter()
            .filter(|g| {
                g.iter()
                    .any(|&i| find_representation(&self.classes[i], d, m).is_some())
            })
            .count();
        Ok(count as u32)
    }
}

fn group_by_key<K: Ord + Clone>(keys: &[K]) -> Vec<Vec<usize>> {
    let mut first_seen: BTreeMap<K, usize> = BTreeMap::new();
    let mut genera: Vec<Vec<usize>> = Vec::new();
    for (i, k) in keys.iter().enumerate() {
        match first_seen.get(k) {
            Some(&g) => genera[g].push(i),
            None => {
                first_seen.insert(k.clone(), genera.len());
                genera.push(vec![i]);
            }
        }
    }
    genera
}

/// Smallest-height value f(x, y) > 0 coprime to |D|.
fn coprime_value(f: &QuadraticForm, abs_d: u64) -> u64 {
    for t in 1i64.. {
        for x in -t..=t {
            for y in 0..=t {
                if x.abs().max(y) != t {
                    continue;
                }
                let v = f.eval(x, y);
                if v > 0 && v <= i128::from(u64::MAX) && gcd(v as u64, abs_d) == 1 {
                    return v as u64;
                }
            }
        }
    }
    unreachable!("a primitive form represents values coprime to any modulus")
}

/// Partition by assigned characters: for each prime discriminant d_i of D
/// except the last, χ_{d_i}(r) at a value r represented by the class and
/// coprime to D. The 2-adic characters come out of the Kronecker symbols
/// attached to -4, 8 and -8.
pub fn genus_partition(d: &Discriminant) -> Result<GenusPartition> {
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    let classes = enumerate_reduced(d);
    let mut labels = d.prime_discriminants();
    // the characters multiply to χ_D(r) = 1, so the last one is redundant
    labels.pop();
    let signatures: Vec<Vec<i32>> = classes
        .iter()
        .map(|f| {
            let r = coprime_value(f, d.abs()) as i64;
            labels.iter().map(|&di| kronecker(di, r)).collect()
        })
        .collect();
    Ok(GenusPartition {
        discriminant: d.clone(),
        genera: group_by_key(&signatures),
        classes,
        character_labels: labels,
    })
}

/// Partition straight from the definition: two classes share a genus iff
/// they represent the same residues in (Z/|D|Z)*.
pub fn genus_partition_residue_oracle(d: &Discriminant) -> Result<GenusPartition> {
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    let n = d.abs();
    if n > RESIDUE_ORACLE_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "|D| for the residue oracle",
            value: n,
            budget: RESIDUE_ORACLE_LIMIT,
        });
    }
    let unit: Vec<bool> = (0..n).map(|r| gcd(r, n) == 1).collect();
    let classes = enumerate_reduced(d);
    let residue_sets: Vec<Vec<bool>> = classes
        .iter()
        .map(|f| {
            let (a, b, c) = (
                f.a.rem_euclid(n as i64) as u64,
                f.b.rem_euclid(n as i64) as u64,
                f.c.rem_euclid(n as i64) as u64,
            );
            let mut seen = vec![false; n as usize];
            let two_a = 2 * a % n;
            // f(-x, -y) = f(x, y): half of the y range suffices
            for y in 0..=n / 2 {
                // f(x, y) stepped in x: f(x+1, y) - f(x, y) = a(2x + 1) + b y
                let mut v = c * y % n * y % n;
                let mut step = (a + b * y) % n;
                for _ in 0..n {
                    seen[v as usize] |= unit[v as usize];
                    v += step;
                    if v >= n {
                        v -= n;
                    }
                    step += two_a;
                    if step >= n {
                        step -= n;
                    }
                }
            }
            seen
        })
        .collect();
    Ok(GenusPartition {
        discriminant: d.clone(),
        genera: group_by_key(&residue_sets),
        classes,
        character_labels: Vec::new(),
    })
}

/// g(m, D) computed from scratch; prefer [`GenusPartition::genera_representing`]
/// when querying many m.
pub fn genera_representing(m: u64, d: &Discriminant) -> Result<u32> {
    genus_partition(d)?.genera_representing(m)
}

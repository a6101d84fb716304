// SPDX-License-Identifier: Apache-2.0

//! E(D), the James constant J(D) and Bernays' constant
//!
//! ```text
//! C(D) = 2^(1 - ω(D)) * sqrt( |D|/φ(|D|) * L(1, χ_D)/π * E(D) )
//! J(D) = sqrt( φ(|D|)/|D| * L(1, χ_D)/π * E(D) )
//! ```
//!
//! for fundamental D < 0, plus the genus-sum identity that links them.

mod euler;
mod genus_sum;
pub mod table;

pub use euler::{
    accelerated_factor, euler_product_accelerated, euler_product_direct, landau_constant_product,
    DEFAULT_DEPTH, DEFAULT_PRIME_BOUND,
};
pub use genus_sum::{genus_sum_check, GenusSum};

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith::Discriminant;
use crate::error::{Error, Result};
use crate::forms::class_number;
use crate::lfunc::{l_one_from_class_number, LValue, DEFAULT_L_EVEN_BOUND};
use crate::numeric::Estimate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    Accelerated,
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Accelerated => "accelerated",
            Method::Both => "both",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "accelerated" => Ok(Method::Accelerated),
            "both" => Ok(Method::Both),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstantOptions {
    pub method: Method,
    /// Prime bound of the direct product.
    pub prime_bound: u64,
    /// Truncation depth of the accelerated product.
    pub depth: u32,
    /// Prime bound for the L(2^k, χ_D) used by the accelerated product.
    pub l_even_bound: u64,
}

impl Default for ConstantOptions {
    fn default() -> Self {
        ConstantOptions {
            method: Method::Direct,
            prime_bound: DEFAULT_PRIME_BOUND,
            depth: DEFAULT_DEPTH,
            l_even_bound: DEFAULT_L_EVEN_BOUND,
        }
    }
}

impl ConstantOptions {
    pub fn direct(prime_bound: u64) -> Self {
        ConstantOptions {
            prime_bound,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    #[serde(rename = "D")]
    pub discriminant: i64,
    pub h: u64,
    pub omega: u32,
    pub phi: u64,
    pub l_one: LValue,
    pub e_d: Estimate,
    pub j_d: f64,
    pub c_d: Estimate,
    pub method: Method,
    pub prime_bound: u64,
    pub depth: u32,
    pub runtime_ms: u64,
}

pub const CSV_HEADER: &str = "D,h,omega,L1,E,C,err,method,prime_bound,runtime_ms";

impl ConstantReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.9},{:.9},{:.9},{:.3e},{},{},{}",
            self.discriminant,
            self.h,
            self.omega,
            self.l_one.value,
            self.e_d.value,
            self.c_d.value,
            self.c_d.abs_error,
            self.method,
            self.prime_bound,
            self.runtime_ms
        )
    }
}

/// C(D) from the closed form, with every intermediate quantity.
pub fn bernays_constant(d: &Discriminant, opts: &ConstantOptions) -> Result<ConstantReport> {
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    let started = Instant::now();
    let h = class_number(d);
    report_with_class_number(d, h, opts, started)
}

/// As [`bernays_constant`], with h(D) already known.
pub fn bernays_constant_with_class_number(
    d: &Discriminant,
    h: u64,
    opts: &ConstantOptions,
) -> Result<ConstantReport> {
    report_with_class_number(d, h, opts, Instant::now())
}

fn report_with_class_number(
    d: &Discriminant,
    h: u64,
    opts: &ConstantOptions,
    started: Instant,
) -> Result<ConstantReport> {
    let l_one = l_one_from_class_number(d, h)?;
    let e_d = match opts.method {
        Method::Direct => euler_product_direct(d, opts.prime_bound)?,
        Method::Accelerated => euler_product_accelerated(d, opts.depth, opts.l_even_bound)?,
        Method::Both => {
            let direct = euler_product_direct(d, opts.prime_bound)?;
            let fast = euler_product_accelerated(d, opts.depth, opts.l_even_bound)?;
            let bound = direct.abs_error + fast.abs_error;
            if (direct.value - fast.value).abs() > bound {
                return Err(Error::EstimatorDisagreement {
                    direct: direct.value,
                    accelerated: fast.value,
                    bound,
                });
            }
            if direct.abs_error <= fast.abs_error {
                direct
            } else {
                fast
            }
        }
    };

    let omega = d.omega();
    let phi = d.phi();
    let abs = d.abs() as f64;
    let ratio = abs / phi as f64;
    let l_over_pi = l_one.value / PI;
    let c = (ratio * l_over_pi * e_d.value).sqrt() / f64::from(1u32 << (omega - 1));
    let j = (l_over_pi * e_d.value / ratio).sqrt();
    // C ∝ sqrt(L E): relative errors halve
    let rel = 0.5 * (e_d.abs_error / e_d.value + l_one.abs_error_bound / l_one.value)
        + 4.0 * f64::EPSILON;

    Ok(ConstantReport {
        discriminant: d.value(),
        h,
        omega,
        phi,
        l_one,
        e_d,
        j_d: j,
        c_d: Estimate::new(c, c * rel),
        method: opts.method,
        prime_bound: opts.prime_bound,
        depth: opts.depth,
        runtime_ms: started.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::table::{C_MINUS_8, LANDAU_RAMANUJAN};

    fn fd(d: i64) -> Discriminant {
        Discriminant::fundamental(d).unwrap()
    }

    #[test]
    fn headline_values_at_moderate_bound() {
        let opts = ConstantOptions::direct(10_000_000);
        let r = bernays_constant(&fd(-4), &opts).unwrap();
        assert!((r.c_d.value - LANDAU_RAMANUJAN).abs() < 1e-8);
        let r = bernays_constant(&fd(-8), &opts).unwrap();
        assert!((r.c_d.value - C_MINUS_8).abs() < 1e-8);
        let r = bernays_constant(&fd(-71), &opts).unwrap();
        assert!((r.c_d.value - 0.938541302).abs() < 1e-8);
        let r = bernays_constant(&fd(-1995), &opts).unwrap();
        assert!((r.c_d.value - 0.093833104).abs() < 1e-8);
    }

    #[test]
    fn report_is_internally_consistent() {
        let opts = ConstantOptions::direct(100_000);
        for d in [-3, -4, -15, -56, -420, -1995] {
            let r = bernays_constant(&fd(d), &opts).unwrap();
            let ratio = r.discriminant.unsigned_abs() as f64 / r.phi as f64;
            let rebuilt = r.j_d * ratio / f64::from(1u32 << (r.omega - 1));
            assert!((rebuilt - r.c_d.value).abs() < 1e-14, "D={d}");
            let direct =
                (ratio * r.l_one.value / PI * r.e_d.value).sqrt() * 2f64.powi(1 - r.omega as i32);
            assert!((direct - r.c_d.value).abs() < 1e-14);
            assert!(r.e_d.value > 1.0 && r.e_d.value < PI * PI / 6.0);
        }
    }

    #[test]
    fn both_methods_cross_check() {
        let opts = ConstantOptions {
            method: Method::Both,
            prime_bound: 10_000_000,
            ..ConstantOptions::default()
        };
        let r = bernays_constant(&fd(-56), &opts).unwrap();
        assert!((r.c_d.value - 0.563486772).abs() < 1e-8);
        assert_eq!(r.method, Method::Both);
    }

    #[test]
    fn rejects_non_fundamental() {
        let d = Discriminant::new(-12).unwrap();
        assert_eq!(
            bernays_constant(&d, &ConstantOptions::default()),
            Err(Error::NotFundamental(-12))
        );
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = bernays_constant(&fd(-20), &ConstantOptions::direct(100_000)).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: ConstantReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.c_d.value.to_bits(), r.c_d.value.to_bits());
        assert!(text.contains("\"D\":-20"));
    }

    #[test]
    fn csv_row_layout() {
        let r = bernays_constant(&fd(-4), &ConstantOptions::direct(100_000)).unwrap();
        let row = r.csv_row();
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), CSV_HEADER.split(',').count());
        assert_eq!(&cols[..3], &["-4", "1", "1"]);
        assert_eq!(cols[7], "direct");
        assert_eq!(cols[8], "100000");
    }

    #[test]
    fn method_parsing() {
        assert_eq!("both".parse::<Method>().unwrap(), Method::Both);
        assert!("fast".parse::<Method>().is_err());
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Published C(D) values for sixty small fundamental discriminants,
//! grouped by ω(D) = 1, 2, 3, 4 (fifteen each).

pub const REFERENCE_TABLE: [(i64, f64); 60] = [
    (-3, 0.638909405),
    (-4, 0.764223654),
    (-7, 0.724719521),
    (-8, 0.872887558),
    (-11, 0.677388018),
    (-19, 0.606300131),
    (-23, 0.841512352),
    (-31, 0.801014576),
    (-43, 0.500610055),
    (-47, 0.891550880),
    (-59, 0.735485997),
    (-67, 0.448813095),
    (-71, 0.938541302),
    (-79, 0.812629337),
    (-83, 0.684502354),
    (-15, 0.501918636),
    (-20, 0.535179999),
    (-24, 0.558357114),
    (-35, 0.407379938),
    (-39, 0.518747305),
    (-40, 0.473558100),
    (-51, 0.390646647),
    (-52, 0.420720518),
    (-55, 0.458949554),
    (-56, 0.563486772),
    (-68, 0.520288297),
    (-87, 0.512573818),
    (-88, 0.375792661),
    (-91, 0.317487516),
    (-95, 0.528624390),
    (-84, 0.310647641),
    (-120, 0.296417662),
    (-132, 0.274765289),
    (-168, 0.267006498),
    (-195, 0.220993565),
    (-228, 0.237562625),
    (-231, 0.309699577),
    (-255, 0.307681243),
    (-260, 0.293752522),
    (-264, 0.319941656),
    (-276, 0.309309571),
    (-280, 0.223644570),
    (-308, 0.277034255),
    (-312, 0.223049066),
    (-340, 0.204812008),
    (-420, 0.164080141),
    (-660, 0.143806822),
    (-840, 0.139069358),
    (-1092, 0.123274604),
    (-1140, 0.171607125),
    (-1155, 0.109195133),
    (-1320, 0.121504603),
    (-1380, 0.117420083),
    (-1428, 0.114424422),
    (-1540, 0.108139197),
    (-1560, 0.161366493),
    (-1716, 0.148895032),
    (-1848, 0.109066658),
    (-1860, 0.151207258),
    (-1995, 0.093833104),
];

/// C(-8), the value the prime-discriminant search compares against.
pub const C_MINUS_8: f64 = 0.872887558;

/// The largest value reported for a prime discriminant below 10^9: C(-984452999).
pub const RECORD_DISCRIMINANT: i64 = -984_452_999;
pub const RECORD_VALUE: f64 = 1.527855;

/// Landau-Ramanujan constant C(-4).
pub const LANDAU_RAMANUJAN: f64 = 0.764223654;

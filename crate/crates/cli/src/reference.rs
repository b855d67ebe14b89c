//! Published reference results reproduced by `vrpdi bench`.

/// Truck-only versus truck-drone results per dataset: best times and
/// truck distances, CPU minutes, and the reported improvements in percent.
pub struct ModeComparisonRef {
    pub dataset: &'static str,
    pub vrp_time: f64,
    pub vrp_distance: f64,
    pub vrp_cpu: f64,
    pub vrpdi_time: f64,
    pub vrpdi_distance: f64,
    pub vrpdi_cpu: f64,
    pub time_pct: f64,
    pub distance_pct: f64,
}

const fn mode_row(
    dataset: &'static str,
    vrp: (f64, f64, f64),
    vrpdi: (f64, f64, f64),
    pct: (f64, f64),
) -> ModeComparisonRef {
    ModeComparisonRef {
        dataset,
        vrp_time: vrp.0,
        vrp_distance: vrp.1,
        vrp_cpu: vrp.2,
        vrpdi_time: vrpdi.0,
        vrpdi_distance: vrpdi.1,
        vrpdi_cpu: vrpdi.2,
        time_pct: pct.0,
        distance_pct: pct.1,
    }
}

pub const MODE_COMPARISON: [ModeComparisonRef; 10] = [
    mode_row(
        "Uniform-71-n50",
        (58.61, 712.31, 5.02),
        (37.63, 662.34, 7.53),
        (55.0, 7.0),
    ),
    mode_row(
        "Uniform-72-n50",
        (60.46, 819.87, 4.66),
        (43.19, 562.46, 10.75),
        (39.0, 45.0),
    ),
    mode_row(
        "Uniform-73-n50",
        (58.40, 770.00, 5.13),
        (39.03, 509.72, 8.00),
        (49.0, 51.0),
    ),
    mode_row(
        "Uniform-91-n100",
        (82.03, 1683.95, 10.34),
        (52.75, 1156.19, 11.08),
        (55.0, 45.0),
    ),
    mode_row(
        "Uniform-92-n100",
        (80.44, 1634.95, 6.92),
        (51.69, 1107.40, 12.40),
        (55.0, 47.0),
    ),
    mode_row(
        "Uniform-93-n100",
        (81.98, 1681.81, 7.13),
        (51.17, 1082.89, 11.72),
        (60.0, 55.0),
    ),
    mode_row(
        "Uniform-1-n250",
        (220.34, 6566.14, 27.86),
        (144.00, 3933.12, 29.14),
        (53.0, 66.0),
    ),
    mode_row(
        "Uniform-2-n250",
        (224.39, 6691.53, 38.61),
        (149.70, 4013.30, 24.75),
        (46.0, 69.0),
    ),
    mode_row(
        "Uniform-5-n500",
        (260.68, 9730.62, 149.37),
        (154.23, 6662.66, 119.68),
        (45.0, 68.0),
    ),
    mode_row(
        "Uniform-6-n500",
        (245.24, 8842.61, 168.39),
        (149.23, 6382.95, 136.56),
        (64.0, 38.0),
    ),
];

/// Drone-range variant: largest node distance, the 75% drone range, the
/// pair count used, and the two published best times.
pub struct DroneRangeRef {
    pub dataset: &'static str,
    pub max_distance: f64,
    pub max_drone_distance: f64,
    pub pairs: usize,
    pub ea: f64,
    pub nnhis: f64,
}

const fn range_row(
    dataset: &'static str,
    max_distance: f64,
    max_drone_distance: f64,
    pairs: usize,
    ea: f64,
    nnhis: f64,
) -> DroneRangeRef {
    DroneRangeRef {
        dataset,
        max_distance,
        max_drone_distance,
        pairs,
        ea,
        nnhis,
    }
}

pub const DRONE_RANGE_FRACTION: f64 = 0.75;

pub const DRONE_RANGE: [DroneRangeRef; 17] = [
    range_row("Doublecenter-71-n50", 822.02, 616.51, 2, 77.15, 87.08),
    range_row("Doublecenter-91-n100", 751.58, 563.69, 3, 79.34, 86.56),
    range_row("Doublecenter-1-n250", 772.27, 579.20, 3, 228.43, 132.71),
    range_row("Doublecenter-5-n500", 896.52, 672.39, 5, 221.60, 162.01),
    range_row("Singlecenter-71-n50", 327.35, 245.52, 2, 51.51, 35.22),
    range_row("Singlecenter-91-n100", 451.54, 338.66, 3, 81.01, 65.63),
    range_row("Singlecenter-1-n250", 478.34, 358.75, 3, 161.91, 97.43),
    range_row("Singlecenter-5-n500", 546.21, 409.66, 5, 181.81, 101.70),
    range_row("Uniform-71-n50", 249.41, 187.06, 2, 36.70, 38.17),
    range_row("Uniform-72-n50", 256.03, 192.02, 2, 40.96, 39.78),
    range_row("Uniform-73-n50", 253.04, 189.78, 2, 40.12, 41.48),
    range_row("Uniform-91-n100", 263.07, 197.30, 3, 43.70, 46.84),
    range_row("Uniform-92-n100", 270.17, 202.62, 3, 40.09, 40.66),
    range_row("Uniform-1-n250", 266.60, 199.95, 3, 80.38, 67.56),
    range_row("Uniform-2-n250", 259.27, 194.45, 3, 79.09, 54.52),
    range_row("Uniform-5-n500", 276.50, 207.37, 5, 87.43, 55.38),
    // The published maximum distance (74.57) is below the published drone
    // range; both are kept as printed.
    range_row("Uniform-6-n500", 74.57, 205.93, 5, 79.31, 52.49),
];

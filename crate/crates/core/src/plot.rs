//! Hand-rolled SVG emission: score histograms with threshold lines and
//! grid-based region maps. No raster or plotting dependency.

use crate::empirical::EmpiricalDistribution;
use crate::svm::DecisionGrid;
use crate::testing::{CalibratedTester, Decision};
use std::fmt::Write as _;

pub const WIDTH: f64 = 640.0;
pub const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;

/// Affine map from data x-range to SVG pixel x. Shared by the emitter and
/// the tests that verify threshold line placement.
pub fn affine_x(data_lo: f64, data_hi: f64, value: f64) -> f64 {
    MARGIN + (value - data_lo) / (data_hi - data_lo) * (WIDTH - 2.0 * MARGIN)
}

fn vline(out: &mut String, x: f64, dashed: bool, color: &str) {
    let dash = if dashed {
        " stroke-dasharray=\"6,4\""
    } else {
        ""
    };
    writeln!(
        out,
        "<line x1=\"{x:.3}\" y1=\"{MARGIN}\" x2=\"{x:.3}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>",
        HEIGHT - MARGIN
    )
    .unwrap();
}

/// Overlaid per-class histograms of the test statistic. Solid lines mark
/// the bounds of the overlap interval (both regions), dashed lines the
/// outer bounds past which both tests reject.
pub fn histogram_svg(
    dist1: &EmpiricalDistribution,
    dist2: &EmpiricalDistribution,
    tester: &CalibratedTester,
    bins: usize,
) -> String {
    let data_lo = dist1.min().min(dist2.min()).min(tester.region1.lower.min(tester.region2.lower));
    let data_hi = dist1.max().max(dist2.max()).max(tester.region1.upper.max(tester.region2.upper));
    let (data_lo, data_hi) = if data_lo < data_hi {
        (data_lo, data_hi)
    } else {
        (data_lo - 0.5, data_hi + 0.5)
    };

    let h1 = dist1.histogram(bins).unwrap();
    let h2 = dist2.histogram(bins).unwrap();
    let max_count = h1
        .iter()
        .chain(h2.iter())
        .map(|b| b.2)
        .max()
        .unwrap()
        .max(1) as f64;

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    )
    .unwrap();
    writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>").unwrap();

    for (hist, color) in [(&h1, "#1f77b4"), (&h2, "#d62728")] {
        for &(lo, hi, count) in hist.iter() {
            if count == 0 {
                continue;
            }
            let x0 = affine_x(data_lo, data_hi, lo);
            let x1 = affine_x(data_lo, data_hi, hi);
            let bar_h = count as f64 / max_count * (HEIGHT - 2.0 * MARGIN);
            writeln!(
                out,
                "<rect x=\"{x0:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{bar_h:.3}\" fill=\"{color}\" fill-opacity=\"0.45\"/>",
                HEIGHT - MARGIN - bar_h,
                x1 - x0
            )
            .unwrap();
        }
    }

    // Solid: overlap-interval bounds. Dashed: outer (outlier) bounds.
    let solid_lo = tester.region1.lower.max(tester.region2.lower);
    let solid_hi = tester.region1.upper.min(tester.region2.upper);
    let dashed_lo = tester.region1.lower.min(tester.region2.lower);
    let dashed_hi = tester.region1.upper.max(tester.region2.upper);
    vline(&mut out, affine_x(data_lo, data_hi, solid_lo), false, "black");
    vline(&mut out, affine_x(data_lo, data_hi, solid_hi), false, "black");
    vline(&mut out, affine_x(data_lo, data_hi, dashed_lo), true, "black");
    vline(&mut out, affine_x(data_lo, data_hi, dashed_hi), true, "black");
    writeln!(out, "</svg>").unwrap();
    out
}

pub fn decision_color(d: Decision) -> &'static str {
    match d {
        Decision::Class1 => "#1f77b4",
        Decision::Class2 => "#d62728",
        Decision::UncertainOverlap => "#ff7f0e",
        Decision::UncertainOutlier => "#7f7f7f",
    }
}

/// Region map: one colored cell per grid entry, row 0 at the bottom.
/// Training points may be overlaid as small circles.
pub fn region_map_svg(
    grid: &DecisionGrid,
    cell_colors: &[&str],
    points: &[[f64; 2]],
    labels: &[f64],
) -> String {
    assert_eq!(cell_colors.len(), grid.values.len());
    let res = grid.resolution;
    let cell_w = (WIDTH - 2.0 * MARGIN) / res as f64;
    let cell_h = (HEIGHT - 2.0 * MARGIN) / res as f64;

    let px = |x: f64| {
        MARGIN + (x - grid.x_range.0) / (grid.x_range.1 - grid.x_range.0) * (WIDTH - 2.0 * MARGIN)
    };
    let py = |y: f64| {
        HEIGHT
            - MARGIN
            - (y - grid.y_range.0) / (grid.y_range.1 - grid.y_range.0) * (HEIGHT - 2.0 * MARGIN)
    };

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    )
    .unwrap();
    writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>").unwrap();
    for row in 0..res {
        for col in 0..res {
            let x = MARGIN + col as f64 * cell_w;
            let y = HEIGHT - MARGIN - (row + 1) as f64 * cell_h;
            writeln!(
                out,
                "<rect x=\"{x:.3}\" y=\"{y:.3}\" width=\"{cell_w:.3}\" height=\"{cell_h:.3}\" fill=\"{}\"/>",
                cell_colors[row * res + col]
            )
            .unwrap();
        }
    }
    for (p, &y) in points.iter().zip(labels) {
        let fill = if y > 0.0 { "#0b3d91" } else { "#7a0b0b" };
        writeln!(
            out,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"2\" fill=\"{fill}\"/>",
            px(p[0]),
            py(p[1])
        )
        .unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

//! Histogram figures as standalone SVG: one group of bars, one overlay path
//! for the semicircle density, axes drawn as plain lines. No graphics
//! dependencies; coordinates use fixed-precision formatting so repeated runs
//! emit identical bytes.

use std::fmt::Write as _;

use sriplab_core::semicircle_density;

use crate::report::num;

pub struct HistogramSpec {
    pub bins: usize,
    pub lo: f64,
    pub hi: f64,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN_L: f64 = 52.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 16.0;
const MARGIN_B: f64 = 36.0;
const OVERLAY_POINTS: usize = 240;

/// Normalized histogram of `samples` with the semicircle density overlaid.
/// Samples outside [lo, hi] are clamped into the edge bins, so the bin masses
/// always total 1.
pub fn render_histogram(samples: &[f64], spec: &HistogramSpec, desc: &str) -> String {
    let bins = spec.bins;
    let span = spec.hi - spec.lo;
    let bin_width = span / bins as f64;

    let mut counts = vec![0u64; bins];
    for &x in samples {
        let raw = ((x - spec.lo) / bin_width).floor();
        let b = (raw as i64).clamp(0, bins as i64 - 1) as usize;
        counts[b] += 1;
    }
    let total = samples.len().max(1) as f64;
    let densities: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / (total * bin_width))
        .collect();

    let overlay_peak = 1.0 / std::f64::consts::PI;
    let d_max = densities
        .iter()
        .fold(overlay_peak, |m, &d| m.max(d))
        .max(1e-12);
    let y_top = d_max * 1.08;

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let baseline = MARGIN_T + plot_h;
    let px = |x: f64| MARGIN_L + (x - spec.lo) / span * plot_w;
    let py = |d: f64| MARGIN_T + plot_h * (1.0 - d / y_top);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"11\">"
    );
    let _ = writeln!(out, "<desc>{desc}</desc>");

    // Axes and ticks.
    let _ = writeln!(out, "<g class=\"axes\" stroke=\"#444444\" fill=\"none\">");
    let _ = writeln!(
        out,
        "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\"/>",
        MARGIN_L,
        baseline,
        MARGIN_L + plot_w,
        baseline
    );
    let _ = writeln!(
        out,
        "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\"/>",
        MARGIN_L, MARGIN_T, MARGIN_L, baseline
    );
    let mut labels = String::new();
    let mut t = spec.lo.ceil() as i64;
    while (t as f64) <= spec.hi {
        let x = px(t as f64);
        let _ = writeln!(
            out,
            "<line x1=\"{x:.3}\" y1=\"{:.3}\" x2=\"{x:.3}\" y2=\"{:.3}\"/>",
            baseline,
            baseline + 5.0
        );
        let _ = writeln!(
            labels,
            "<text x=\"{x:.3}\" y=\"{:.3}\" text-anchor=\"middle\">{t}</text>",
            baseline + 18.0
        );
        t += 1;
    }
    let mut d_tick = 0.1;
    while d_tick < y_top {
        let y = py(d_tick);
        let _ = writeln!(
            out,
            "<line x1=\"{:.3}\" y1=\"{y:.3}\" x2=\"{:.3}\" y2=\"{y:.3}\"/>",
            MARGIN_L - 5.0,
            MARGIN_L
        );
        let _ = writeln!(
            labels,
            "<text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"end\">{d_tick:.1}</text>",
            MARGIN_L - 8.0,
            y + 4.0
        );
        d_tick += 0.1;
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "<g class=\"ticklabels\" fill=\"#444444\">");
    out.push_str(&labels);
    let _ = writeln!(out, "</g>");

    // Histogram bars: exactly one group of rects, each annotated with its bin
    // edges and density for machine checking.
    let _ = writeln!(
        out,
        "<g class=\"histogram\" fill=\"#6f9fd8\" stroke=\"#3d6ea5\" stroke-width=\"0.5\">"
    );
    for (i, &d) in densities.iter().enumerate() {
        let x0 = spec.lo + i as f64 * bin_width;
        let x1 = spec.lo + (i + 1) as f64 * bin_width;
        let x_px = px(x0);
        let w_px = px(x1) - x_px;
        let y_px = py(d);
        let _ = writeln!(
            out,
            "<rect x=\"{x_px:.3}\" y=\"{y_px:.3}\" width=\"{w_px:.3}\" height=\"{:.3}\" \
             data-x0=\"{}\" data-x1=\"{}\" data-density=\"{}\"/>",
            baseline - y_px,
            num(x0),
            num(x1),
            num(d)
        );
    }
    let _ = writeln!(out, "</g>");

    // Semicircle density overlay: exactly one path.
    let mut path = String::new();
    for j in 0..=OVERLAY_POINTS {
        let x = spec.lo + span * j as f64 / OVERLAY_POINTS as f64;
        let cmd = if j == 0 { 'M' } else { 'L' };
        let _ = write!(path, "{cmd}{:.3} {:.3} ", px(x), py(semicircle_density(x)));
    }
    let _ = writeln!(
        out,
        "<path class=\"overlay\" d=\"{}\" fill=\"none\" stroke=\"#b03a2e\" stroke-width=\"1.6\"/>",
        path.trim_end()
    );

    out.push_str("</svg>\n");
    out
}

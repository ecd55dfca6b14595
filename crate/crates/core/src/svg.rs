//! Deterministic SVG renderings: a correlation heatmap and the dual
//! theoretical/empirical circle plot. Plain string assembly with fixed
//! precision, no timestamps, no randomness — identical inputs give
//! byte-identical files.

use std::fmt::Write as _;

use crate::circle::{ValueType, VALUE_COUNT};
use crate::structure::{Config2, CorrelationMatrix};

/// Diverging blue–white–red scale over r in [-1, 1].
fn heat_color(r: f64) -> String {
    let r = r.clamp(-1.0, 1.0);
    let (red, green, blue) = if r >= 0.0 {
        let t = r;
        (255.0, 255.0 * (1.0 - t), 255.0 * (1.0 - t))
    } else {
        let t = -r;
        (255.0 * (1.0 - t), 255.0 * (1.0 - t), 255.0)
    };
    format!("rgb({},{},{})", red.round() as u8, green.round() as u8, blue.round() as u8)
}

/// 10×10 correlation heatmap with value labels and per-cell coefficients.
pub fn heatmap_svg(matrix: &CorrelationMatrix) -> String {
    const CELL: f64 = 42.0;
    const LEFT: f64 = 110.0;
    const TOP: f64 = 30.0;
    let width = LEFT + CELL * VALUE_COUNT as f64 + 20.0;
    let height = TOP + CELL * VALUE_COUNT as f64 + 20.0;

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    svg.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);

    for (j, value) in ValueType::ALL.iter().enumerate() {
        let x = LEFT + CELL * (j as f64 + 0.5);
        let _ = write!(
            svg,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">{label}</text>"#,
            y = TOP - 8.0,
            label = value.abbrev()
        );
        let ly = TOP + CELL * (j as f64 + 0.5) + 4.0;
        let _ = write!(
            svg,
            r#"<text x="{x:.1}" y="{ly:.1}" font-family="sans-serif" font-size="12" text-anchor="end">{label}</text>"#,
            x = LEFT - 8.0,
            label = value.name()
        );
    }

    for i in 0..VALUE_COUNT {
        for j in 0..VALUE_COUNT {
            let r = matrix.rows()[i][j];
            let x = LEFT + CELL * j as f64;
            let y = TOP + CELL * i as f64;
            let _ = write!(
                svg,
                r##"<rect x="{x:.1}" y="{y:.1}" width="{CELL:.1}" height="{CELL:.1}" fill="{fill}" stroke="#cccccc" stroke-width="0.5"/>"##,
                fill = heat_color(r)
            );
            let _ = write!(
                svg,
                r#"<text x="{cx:.1}" y="{cy:.1}" font-family="sans-serif" font-size="9" text-anchor="middle">{r:.2}</text>"#,
                cx = x + CELL / 2.0,
                cy = y + CELL / 2.0 + 3.0,
            );
        }
    }
    svg.push_str("</svg>");
    svg
}

/// Theoretical circle anchors (circles) and an aligned empirical
/// configuration (diamonds), with a unit circle guide and labels.
pub fn circle_plot_svg(theory: &Config2, empirical: &Config2) -> String {
    const SIZE: f64 = 460.0;
    const MARGIN: f64 = 60.0;
    let scale = (SIZE - 2.0 * MARGIN) / 1.2; // data roughly in [-0.6, 0.6]
    let cx = SIZE / 2.0;
    let cy = SIZE / 2.0;
    let px = |x: f64| cx + scale * x;
    let py = |y: f64| cy - scale * y;

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE:.0}" height="{SIZE:.0}" viewBox="0 0 {SIZE:.0} {SIZE:.0}">"#
    );
    svg.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = write!(
        svg,
        r##"<circle cx="{cx:.1}" cy="{cy:.1}" r="{r:.1}" fill="none" stroke="#bbbbbb" stroke-dasharray="4 3"/>"##,
        r = scale * 0.5
    );

    for (i, value) in ValueType::ALL.iter().enumerate() {
        let tx = px(theory[i][0]);
        let ty = py(theory[i][1]);
        let _ = write!(
            svg,
            r##"<circle cx="{tx:.1}" cy="{ty:.1}" r="5" fill="#4477aa"/>"##
        );
        let _ = write!(
            svg,
            r##"<text x="{lx:.1}" y="{ly:.1}" font-family="sans-serif" font-size="11" fill="#4477aa" text-anchor="middle">{label}</text>"##,
            lx = tx,
            ly = ty - 9.0,
            label = value.abbrev()
        );
        let ex = px(empirical[i][0]);
        let ey = py(empirical[i][1]);
        let _ = write!(
            svg,
            r##"<path d="M {x0:.1} {ey:.1} L {ex:.1} {y0:.1} L {x1:.1} {ey:.1} L {ex:.1} {y1:.1} Z" fill="#cc6677"/>"##,
            x0 = ex - 5.0,
            y0 = ey - 5.0,
            x1 = ex + 5.0,
            y1 = ey + 5.0,
        );
        let _ = write!(
            svg,
            r##"<text x="{lx:.1}" y="{ly:.1}" font-family="sans-serif" font-size="11" fill="#cc6677" text-anchor="middle">{label}</text>"##,
            lx = ex,
            ly = ey + 17.0,
            label = value.abbrev()
        );
    }

    svg.push_str(concat!(
        r##"<circle cx="20" cy="20" r="5" fill="#4477aa"/>"##,
        r##"<text x="30" y="24" font-family="sans-serif" font-size="12">theoretical</text>"##,
        r##"<path d="M 15 45 L 20 40 L 25 45 L 20 50 Z" fill="#cc6677"/>"##,
        r##"<text x="30" y="49" font-family="sans-serif" font-size="12">empirical</text>"##,
    ));
    svg.push_str("</svg>");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{correlation_matrix, synthetic_circle_profiles, theoretical_config};

    #[test]
    fn heatmap_is_deterministic_and_well_formed() {
        let profiles = synthetic_circle_profiles(60, 5, 0.02);
        let matrix = correlation_matrix(&profiles).unwrap();
        let a = heatmap_svg(&matrix);
        let b = heatmap_svg(&matrix);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>"));
        assert_eq!(a.matches("<rect").count(), 101); // background + 100 cells
    }

    #[test]
    fn heat_color_endpoints() {
        assert_eq!(heat_color(1.0), "rgb(255,0,0)");
        assert_eq!(heat_color(-1.0), "rgb(0,0,255)");
        assert_eq!(heat_color(0.0), "rgb(255,255,255)");
    }

    #[test]
    fn circle_plot_draws_both_configurations() {
        let theory = theoretical_config();
        let svg = circle_plot_svg(&theory, &theory);
        assert!(svg.contains("theoretical"));
        assert!(svg.contains("empirical"));
        assert_eq!(svg.matches("<circle").count(), 1 + 10 + 1); // guide + anchors + legend
        assert_eq!(svg.matches("<path").count(), 10 + 1); // diamonds + legend
    }
}

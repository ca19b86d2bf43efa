use std::fmt::Write;

use super::PersistenceDiagram;

fn fmt_end(x: f64) -> String {
    if x.is_infinite() {
        "inf".to_string()
    } else {
        format!("{x}")
    }
}

/// One line per bar, `dim k: [b, d)`, sorted by (dim, birth).
pub fn render_text(diagram: &PersistenceDiagram) -> String {
    let mut out = String::new();
    for b in &diagram.bars {
        writeln!(out, "dim {}: [{}, {})", b.dim, fmt_end(b.birth), fmt_end(b.death)).unwrap();
    }
    out
}

/// Static SVG barcode: one horizontal bar per interval, grouped by
/// dimension, x axis in scale units. Infinite bars run to the right edge.
pub fn render_svg(diagram: &PersistenceDiagram) -> String {
    const WIDTH: f64 = 640.0;
    const LEFT: f64 = 60.0;
    const RIGHT: f64 = 20.0;
    const ROW: f64 = 10.0;
    const GAP: f64 = 24.0;
    const TOP: f64 = 20.0;
    const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

    let finite_max = diagram
        .bars
        .iter()
        .flat_map(|b| [b.birth, b.death])
        .filter(|x| x.is_finite())
        .fold(0.0f64, f64::max);
    let x_max = if finite_max > 0.0 { finite_max * 1.1 } else { 1.0 };
    let plot_w = WIDTH - LEFT - RIGHT;
    let x = |v: f64| LEFT + plot_w * (v.min(x_max) / x_max);

    let mut dims: Vec<usize> = diagram.bars.iter().map(|b| b.dim).collect();
    dims.dedup();

    let mut body = String::new();
    let mut y = TOP;
    for &k in &dims {
        let color = COLORS[k % COLORS.len()];
        writeln!(body, r#"<text x="4" y="{:.2}" font-size="12" font-family="sans-serif">H{k}</text>"#, y + ROW).unwrap();
        for b in diagram.bars_in_dim(k) {
            let x0 = x(b.birth);
            let x1 = if b.is_infinite() { WIDTH - RIGHT } else { x(b.death) };
            writeln!(
                body,
                r#"<rect x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{color}"/>"#,
                (x1 - x0).max(0.5),
                ROW * 0.7
            )
            .unwrap();
            y += ROW;
        }
        y += GAP;
    }

    let axis_y = y;
    let height = axis_y + 30.0;
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height:.0}" viewBox="0 0 {WIDTH} {height:.0}">"#
    )
    .unwrap();
    svg.push_str(&body);
    writeln!(
        svg,
        r#"<line x1="{LEFT}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="black"/>"#,
        WIDTH - RIGHT
    )
    .unwrap();
    for i in 0..=5 {
        let v = x_max * i as f64 / 5.0;
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" font-family="sans-serif" text-anchor="middle">{:.3}</text>"#,
            x(v),
            axis_y + 14.0,
            v
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="10" font-family="sans-serif" text-anchor="end">eps</text>"#,
        WIDTH - RIGHT,
        axis_y + 26.0
    )
    .unwrap();
    svg.push_str("</svg>\n");
    svg
}

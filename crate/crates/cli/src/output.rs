//! Number formatting and the CSV/SVG writers shared by the commands.

use std::fmt::Write as _;

use trispec::Method;

/// `%g`-style formatting with six significant digits.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    trim_zeros(&format!("{:.*}", (5 - exp) as usize, x))
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Quotes a CSV field when it contains a separator or quote.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_row(fields: &[String]) -> String {
    let mut line = fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

pub fn color(method: Method) -> &'static str {
    match method {
        Method::Polya => "#4e79a7",
        Method::Protter => "#f28e2b",
        Method::Freitas => "#59a14f",
        Method::RectThm => "#e15759",
        Method::SectorThm => "#b07aa1",
        Method::SectorContaining => "#9c755f",
        Method::Variational => "#76b7b2",
        Method::LargeM => "#edc948",
    }
}

/// Flat region map: one rect per cell, `M` to the right and `U` upwards,
/// followed by a legend of the methods that appear.
pub fn region_svg(winners: &[Method], w: usize, h: usize, m_max: f64, legend: &[Method]) -> String {
    const CELL: usize = 3;
    const MARGIN: usize = 40;
    let (pw, ph) = (w * CELL, h * CELL);
    let legend_h = 20 * legend.len() + 10;
    let width = pw + 2 * MARGIN + 140;
    let height = (ph + 2 * MARGIN).max(legend_h + MARGIN);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#);
    for j in 0..h {
        for i in 0..w {
            let x = MARGIN + i * CELL;
            let y = MARGIN + (h - 1 - j) * CELL;
            let _ = writeln!(
                s,
                r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
                color(winners[j * w + i])
            );
        }
    }
    let bottom = MARGIN + ph;
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">M</text>"#, MARGIN + pw / 2, bottom + 28);
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="{}" font-size="10" text-anchor="middle">1</text>"#, bottom + 14);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="10" text-anchor="middle">{}</text>"#,
        MARGIN + pw,
        bottom + 14,
        sig(m_max)
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">U</text>"#, MARGIN / 2, MARGIN + ph / 2);
    let _ = writeln!(s, r#"<text x="{}" y="{bottom}" font-size="10" text-anchor="end">0</text>"#, MARGIN - 4);
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="10" text-anchor="end">1</text>"#, MARGIN - 4, MARGIN + 8);
    let lx = MARGIN + pw + 20;
    for (k, m) in legend.iter().enumerate() {
        let y = MARGIN + 20 * k;
        let _ = writeln!(s, r#"<rect x="{lx}" y="{y}" width="14" height="14" fill="{}"/>"#, color(*m));
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12">{}</text>"#, lx + 20, y + 12, m.name());
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig(45.58578), "45.5858");
        assert_eq!(sig(212.7349), "212.735");
        assert_eq!(sig(49.348022), "49.348");
        assert_eq!(sig(0.8313307), "0.831331");
        assert_eq!(sig(999999.7), "1e6");
        assert_eq!(sig(-2.5), "-2.5");
        assert_eq!(sig(1.5e-7), "1.5e-7");
        assert_eq!(sig(0.0), "0");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("Upper bound, cited"), "\"Upper bound, cited\"");
        assert_eq!(csv_row(&["a".into(), "b".into()]), "a,b\n");
    }
}

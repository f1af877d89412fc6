//! Static SVG rendering of a barcode: one horizontal segment per bar,
//! grouped by degree, with infinite bars running off the right edge.

use std::fmt::Write;

use crate::barcode::Barcode;
use crate::novikov::Exponent;

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 48.0;
const ROW: f64 = 14.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Render `barcode` with an optional title. The output depends only on the
/// barcode, so it is byte-stable.
pub fn barcode_svg(barcode: &Barcode, title: &str) -> String {
    let bars: Vec<_> = barcode.bars().collect();
    let mut lo: Option<Exponent> = None;
    let mut hi: Option<Exponent> = None;
    for b in &bars {
        let end = b.death().unwrap_or_else(|| b.birth.clone());
        lo = Some(lo.map_or(b.birth.clone(), |x| x.min(b.birth.clone())));
        hi = Some(hi.map_or(end.clone(), |x| x.max(end)));
    }
    let lo = lo.map_or(0.0, |x| x.to_f64());
    let mut hi = hi.map_or(1.0, |x| x.to_f64());
    if hi <= lo {
        hi = lo + 1.0;
    }
    // Leave room for the arrows of infinite bars.
    let span = (hi - lo) * 1.1;
    let x = |v: f64| MARGIN + (v - lo) / span * (WIDTH - 2.0 * MARGIN);
    let groups = barcode.by_degree();
    let rows = bars.len() + groups.len();
    let height = 2.0 * MARGIN + ROW * rows.max(1) as f64;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="monospace" font-size="10">"#
    );
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="{:.1}" font-size="12">{}</text>"#, MARGIN / 2.0, escape(title));
    let axis_y = height - MARGIN / 2.0;
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{axis_y:.1}" x2="{:.1}" y2="{axis_y:.1}" stroke="black"/>"#,
        WIDTH - MARGIN
    );
    for (v, anchor) in [(lo, "start"), (hi, "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="{anchor}">{v}</text>"#,
            x(v),
            axis_y + 12.0
        );
    }
    let mut y = MARGIN;
    for (degree, group) in &groups {
        let label = degree.map_or("bars".to_string(), |d| format!("degree {d}"));
        let _ = writeln!(s, r#"<text x="4" y="{:.1}">{label}</text>"#, y + ROW * 0.7);
        y += ROW;
        for b in group.bars() {
            let x1 = x(b.birth.to_f64());
            let (x2, colour) = match b.death() {
                Some(d) => (x(d.to_f64()), "steelblue"),
                None => (WIDTH - MARGIN, "firebrick"),
            };
            let _ = writeln!(
                s,
                r#"<line x1="{x1:.1}" y1="{:.1}" x2="{x2:.1}" y2="{:.1}" stroke="{colour}" stroke-width="3"><title>{}</title></line>"#,
                y + ROW / 2.0,
                y + ROW / 2.0,
                escape(&b.to_string())
            );
            if b.is_infinite() {
                let _ = writeln!(
                    s,
                    r#"<path d="M {:.1} {:.1} l 6 4 l -6 4 z" fill="{colour}"/>"#,
                    x2,
                    y + ROW / 2.0 - 4.0
                );
            }
            y += ROW;
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcode::Bar;

    #[test]
    fn renders_each_bar() {
        let b = Barcode::from_bars([
            Bar::finite(Exponent::zero(), Exponent::one()).with_degree(Some(0)),
            Bar::infinite(Exponent::new(1, 2)).with_degree(Some(1)),
        ]);
        let svg = barcode_svg(&b, "a <test>");
        assert_eq!(svg.matches("stroke-width=\"3\"").count(), 2);
        assert!(svg.contains("a &lt;test&gt;"));
        assert_eq!(svg, barcode_svg(&b, "a <test>"));
        assert!(barcode_svg(&Barcode::new(), "").starts_with("<svg"));
    }
}

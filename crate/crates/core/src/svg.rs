//! Three-panel SVG of `N(P)`, `N(Q)` and `N(f)` with faces coloured by type.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::faces::FaceType;
use crate::report::{BifurcationReport, PolytopeJson};

const PANEL: f64 = 300.0;
const PAD: f64 = 36.0;
const TOP: f64 = 40.0;
const LEGEND: f64 = 60.0;

const STYLE: &str = "\
.grid{stroke:#e4e4e4;stroke-width:1}
.axis{stroke:#9a9a9a;stroke-width:1.2}
.hull{fill:#dde8f3;stroke:#4a6f94;stroke-width:2}
.type-i{stroke:#c0392b;fill:#c0392b;stroke-width:4}
.type-ii{stroke:#2471a3;fill:#2471a3;stroke-width:4}
.interior{stroke:#7f8c8d;fill:#7f8c8d;stroke-width:2;stroke-dasharray:5 3}
.vertex{fill:#2c3e50}
.label{font:11px sans-serif;fill:#2c3e50}
.title{font:bold 14px sans-serif;fill:#2c3e50}
";

struct Frame {
    x0: f64,
    min: (i64, i64),
    step: f64,
}

impl Frame {
    fn new(x0: f64, p: &PolytopeJson) -> Frame {
        let xs = p.vertices.iter().map(|v| v[0]);
        let ys = p.vertices.iter().map(|v| v[1]);
        let min = (xs.clone().min().unwrap_or(0).min(0), ys.clone().min().unwrap_or(0).min(0));
        let max = (xs.max().unwrap_or(0).max(1), ys.max().unwrap_or(0).max(1));
        let span = (max.0 - min.0).max(max.1 - min.1) as f64;
        Frame { x0, min, step: (PANEL - 2.0 * PAD) / span }
    }

    fn map(&self, v: &[i64]) -> (f64, f64) {
        let x = self.x0 + PAD + (v[0] - self.min.0) as f64 * self.step;
        let y = TOP + PANEL - PAD - (v[1] - self.min.1) as f64 * self.step;
        (x, y)
    }

    fn cells(&self) -> i64 {
        ((PANEL - 2.0 * PAD) / self.step).round() as i64
    }
}

fn class_of(t: FaceType) -> &'static str {
    match t {
        FaceType::TypeI => "type-i",
        FaceType::TypeII => "type-ii",
        FaceType::Interior => "interior",
    }
}

/// Vertices of a polygon in counter-clockwise order around their centroid.
fn cyclic(vertices: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = vertices.len() as f64;
    let cx = vertices.iter().map(|v| v[0] as f64).sum::<f64>() / n;
    let cy = vertices.iter().map(|v| v[1] as f64).sum::<f64>() / n;
    let mut out = vertices.to_vec();
    out.sort_by(|a, b| {
        let ta = (a[1] as f64 - cy).atan2(a[0] as f64 - cx);
        let tb = (b[1] as f64 - cy).atan2(b[0] as f64 - cx);
        ta.total_cmp(&tb)
    });
    out
}

fn panel(out: &mut String, x0: f64, title: &str, p: &PolytopeJson, typed: bool) {
    let fr = Frame::new(x0, p);
    let _ = writeln!(out, "<g class=\"panel\">");
    let _ = writeln!(out, "<text class=\"title\" x=\"{:.2}\" y=\"{:.2}\">{title}</text>", x0 + PAD, TOP - 14.0);
    for i in 0..=fr.cells() {
        let a = fr.map(&[fr.min.0 + i, fr.min.1]);
        let b = fr.map(&[fr.min.0 + i, fr.min.1 + fr.cells()]);
        let c = fr.map(&[fr.min.0, fr.min.1 + i]);
        let d = fr.map(&[fr.min.0 + fr.cells(), fr.min.1 + i]);
        let cls = |k: i64| if k == 0 { "axis" } else { "grid" };
        let _ = writeln!(out, "<line class=\"{}\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>", cls(fr.min.0 + i), a.0, a.1, b.0, b.1);
        let _ = writeln!(out, "<line class=\"{}\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>", cls(fr.min.1 + i), c.0, c.1, d.0, d.1);
    }
    if p.dim == 2 {
        let pts: Vec<String> = cyclic(&p.vertices)
            .iter()
            .map(|v| {
                let (x, y) = fr.map(v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(out, "<polygon class=\"hull\" points=\"{}\"/>", pts.join(" "));
    }
    for face in p.faces.iter().filter(|f| f.dim == 1) {
        let a = fr.map(&face.vertices[0]);
        let b = fr.map(&face.vertices[1]);
        let cls = if typed { face.kind.map(class_of).unwrap_or("hull") } else { "hull" };
        let _ = writeln!(
            out,
            "<line class=\"{cls}\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"><title>{}</title></line>",
            a.0, a.1, b.0, b.1, face.label
        );
    }
    for v in &p.vertices {
        let (x, y) = fr.map(v);
        let label = format!("({},{})", v[0], v[1]);
        let cls = if typed {
            p.faces
                .iter()
                .find(|f| f.dim == 0 && f.vertices[0] == *v)
                .and_then(|f| f.kind)
                .map(class_of)
                .unwrap_or("vertex")
        } else {
            "vertex"
        };
        let _ = writeln!(out, "<circle class=\"{cls}\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4.5\"><title>{label}</title></circle>");
        let _ = writeln!(out, "<text class=\"label\" x=\"{:.2}\" y=\"{:.2}\">{label}</text>", x + 6.0, y - 6.0);
    }
    let _ = writeln!(out, "</g>");
}

/// Renders the three Newton polytopes. Only two-variable reports can be drawn.
pub fn render_svg(report: &BifurcationReport) -> Result<String> {
    if report.dimension != 2 {
        return Err(Error::Unsupported(format!(
            "SVG output needs two variables, this input has {}; use the JSON output instead",
            report.dimension
        )));
    }
    let width = 3.0 * PANEL;
    let height = TOP + PANEL + LEGEND;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(out, "<style>\n{STYLE}</style>");
    let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{width:.0}\" height=\"{height:.0}\" fill=\"#ffffff\"/>");
    panel(&mut out, 0.0, "N(P)", &report.polytopes.p, false);
    panel(&mut out, PANEL, "N(Q)", &report.polytopes.q, false);
    panel(&mut out, 2.0 * PANEL, "N(f) = N(P) + N(Q)", &report.polytopes.f, true);
    let y = TOP + PANEL + 20.0;
    let _ = writeln!(out, "<g class=\"legend\">");
    for (i, (cls, text)) in [("type-i", "type I face"), ("type-ii", "type II face"), ("interior", "interior face")]
        .iter()
        .enumerate()
    {
        let x = PAD + i as f64 * 180.0;
        let _ = writeln!(out, "<line class=\"{cls}\" x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\"/>", x + 30.0);
        let _ = writeln!(out, "<text class=\"label\" x=\"{:.2}\" y=\"{:.2}\">{text}</text>", x + 38.0, y + 4.0);
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::default_var_names;
    use crate::rational::RationalFunction;
    use crate::report::bifurcation_superset;

    fn svg(s: &str) -> String {
        let f = RationalFunction::parse(s, &default_var_names(2)).unwrap();
        render_svg(&bifurcation_superset(&f, &Default::default()).unwrap()).unwrap()
    }

    #[test]
    fn figure_polytopes_are_labelled() {
        let s = svg("(1 + x^2*y^3 + x^5*y^3)/(1 + x^2*y^3 + x^4*y)");
        for v in ["(0,0)", "(4,6)", "(7,6)", "(9,4)", "(4,1)"] {
            assert!(s.contains(&format!(">{v}</text>")), "{v}");
        }
        assert_eq!(s.matches("<line class=\"type-i\"").count(), 3 + 1);
        assert_eq!(s.matches("<line class=\"type-ii\"").count(), 2 + 1);
        assert!(s.contains("<circle class=\"type-i\""));
        assert_eq!(s, svg("(1 + x^2*y^3 + x^5*y^3)/(1 + x^2*y^3 + x^4*y)"));
    }

    #[test]
    fn segment_polytope_is_drawn() {
        let s = svg("(x+y)/(x+2*y)");
        assert!(!s.contains("<polygon"));
        assert!(s.contains("<title>(0,2)-(2,0)</title>"));
    }

    #[test]
    fn three_variables_are_refused() {
        let f = RationalFunction::parse("1 + x + y + z", &default_var_names(3)).unwrap();
        let r = bifurcation_superset(&f, &Default::default()).unwrap();
        assert!(matches!(render_svg(&r), Err(Error::Unsupported(_))));
    }
}

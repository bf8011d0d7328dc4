//! SVG rendering of the developed triangulation: geodesic sides as
//! half-circles and vertical lines, marked points, killer intervals as
//! shaded strips along the axis, and special axes.
//!
//! All geometry is computed exactly; conversion to decimal happens only
//! here, rounded to 12 significant digits, so output is byte-deterministic.

use std::collections::BTreeSet;

use jigsaw_core::cuspset::ClassificationReport;
use jigsaw_core::develop::DevelopedTile;
use jigsaw_core::exact::ExtendedRational;
use jigsaw_core::tiles::{standard_marked_points, SideIndex};
use jigsaw_core::JigsawGroup;
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub struct SvgOptions {
    pub window: (BigRational, BigRational),
    pub depth: usize,
}

fn f(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    // round to 12 significant digits, print the shortest representation
    let rounded: f64 = format!("{v:.11e}").parse().expect("rounded float");
    format!("{rounded}")
}

fn rat_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("window-scale rationals fit in f64")
}

/// Collect developed tiles within `depth` crossings of the base copy whose
/// horizontal span meets the window.
fn collect_tiles(g: &JigsawGroup, opts: &SvgOptions) -> Vec<DevelopedTile> {
    let (a, b) = &opts.window;
    let in_window = |t: &DevelopedTile| {
        let feet: Vec<BigRational> =
            t.vertices().iter().filter_map(ExtendedRational::to_rational).collect();
        if feet.is_empty() {
            return false;
        }
        let lo = feet.iter().min().unwrap();
        let hi = feet.iter().max().unwrap();
        hi >= a && lo <= b
    };
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut keep = Vec::new();
    let mut frontier: Vec<DevelopedTile> = g.base_placements().to_vec();
    for layer in 0..=opts.depth {
        let mut next = Vec::new();
        for t in &frontier {
            let key = format!("{:?}", t.placement);
            if !seen.insert(key) {
                continue;
            }
            if in_window(t) {
                keep.push(t.clone());
            }
            if layer < opts.depth {
                for &s in &SideIndex::ALL {
                    next.push(t.cross(g, s));
                }
            }
        }
        frontier = next;
    }
    keep
}

/// Render the developed picture. The report, when given, contributes the
/// killer-interval strips and the special axes.
pub fn render(g: &JigsawGroup, opts: &SvgOptions, report: Option<&ClassificationReport>) -> String {
    let (a, b) = (rat_f64(&opts.window.0), rat_f64(&opts.window.1));
    let span = (b - a).max(1e-9);
    let width_px = 1000.0;
    let scale = width_px / span;
    let top_plane = span / 2.0;
    let base_y = top_plane * scale;
    let strip_h = 14.0_f64.min(base_y * 0.1 + 2.0);
    let height_px = base_y + strip_h + 2.0;
    let xpx = |x: f64| (x - a) * scale;
    let ypx = |y: f64| base_y - y * scale;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" width=\"{}\" height=\"{}\">\n",
        f(width_px),
        f(height_px),
        f(width_px),
        f(height_px)
    ));
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
        f(width_px),
        f(height_px)
    ));

    // killer intervals as shaded strips on the axis
    if let Some(report) = report {
        for (center, radius) in &report.intervals {
            let Some(c) = center.to_rational() else { continue };
            let lo = rat_f64(&(&c - radius));
            let hi = rat_f64(&(&c + radius));
            if hi < a || lo > b {
                continue;
            }
            let (lo, hi) = (lo.max(a), hi.min(b));
            out.push_str(&format!(
                "<rect class=\"killer\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#8ecae6\" fill-opacity=\"0.45\"/>\n",
                f(xpx(lo)),
                f(base_y),
                f((hi - lo) * scale),
                f(strip_h)
            ));
        }
    }

    // dedup geodesic sides over all kept tiles
    let tiles = collect_tiles(g, opts);
    let mut sides: BTreeSet<(ExtendedRational, ExtendedRational)> = BTreeSet::new();
    for t in &tiles {
        for &s in &SideIndex::ALL {
            let (p, q) = t.side_endpoints(s);
            let (p, q) = if p <= q { (p, q) } else { (q, p) };
            sides.insert((p, q));
        }
    }
    for (p, q) in &sides {
        if q.is_infinity() {
            let x = rat_f64(&p.to_rational().expect("one endpoint is finite"));
            if x < a || x > b {
                continue;
            }
            out.push_str(&format!(
                "<line class=\"tile-side\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"0\" stroke=\"#1d3557\" stroke-width=\"1\" fill=\"none\"/>\n",
                f(xpx(x)),
                f(base_y)
            ));
        } else {
            let pf = rat_f64(&p.to_rational().unwrap());
            let qf = rat_f64(&q.to_rational().unwrap());
            if qf < a || pf > b {
                continue;
            }
            let r = (qf - pf) / 2.0 * scale;
            out.push_str(&format!(
                "<path class=\"tile-side\" d=\"M {} {} A {} {} 0 0 1 {} {}\" stroke=\"#1d3557\" stroke-width=\"1\" fill=\"none\"/>\n",
                f(xpx(pf)),
                f(base_y),
                f(r),
                f(r),
                f(xpx(qf)),
                f(base_y)
            ));
        }
    }

    // special axes
    if let Some(report) = report {
        let mut axes: BTreeSet<(ExtendedRational, ExtendedRational)> = BTreeSet::new();
        for s in &report.specials {
            if let Ok(fixed) = s.witness.element.rational_fixed_points() {
                if fixed.len() == 2 {
                    axes.insert((fixed[0].clone(), fixed[1].clone()));
                }
            }
        }
        for (p, q) in &axes {
            let (Some(pf), Some(qf)) = (p.to_rational(), q.to_rational()) else { continue };
            let (pf, qf) = (rat_f64(&pf), rat_f64(&qf));
            if qf < a || pf > b {
                continue;
            }
            let r = (qf - pf) / 2.0 * scale;
            out.push_str(&format!(
                "<path class=\"special-axis\" d=\"M {} {} A {} {} 0 0 1 {} {}\" stroke=\"#e63946\" stroke-width=\"2\" fill=\"none\"/>\n",
                f(xpx(pf)),
                f(base_y),
                f(r),
                f(r),
                f(xpx(qf)),
                f(base_y)
            ));
        }
    }

    // marked points
    let mut marked: BTreeSet<(String, String)> = BTreeSet::new();
    for t in &tiles {
        let pts = standard_marked_points(g.jigsaw().tile(t.tile).params());
        for (x, h2) in &pts {
            let (ix, ih2) = t.placement.apply_upper(x, h2);
            let px = rat_f64(&ix);
            if px < a || px > b {
                continue;
            }
            let py = rat_f64(&ih2).sqrt();
            marked.insert((f(xpx(px)), f(ypx(py))));
        }
    }
    for (cx, cy) in &marked {
        out.push_str(&format!(
            "<circle class=\"marked-point\" cx=\"{cx}\" cy=\"{cy}\" r=\"2.5\" fill=\"#e76f51\"/>\n"
        ));
    }

    out.push_str("</svg>\n");
    out
}

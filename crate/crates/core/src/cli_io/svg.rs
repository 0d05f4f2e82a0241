//! SVG rendering of rank-2 fans: one element per cone clipped to a disk, walls as lines,
//! hatched cores. Output is deterministic for fixed input.

use std::fmt::Write as _;

use crate::core_facade::core;
use crate::error::{ChambrierError, Result};
use crate::exact_geometry::linalg::{to_f64, LinForm, Q};
use crate::fan_kernel::{Ambient, Cone, Fan};

/// Number of sides of the polygon standing for the viewport disk.
const DISK_SIDES: usize = 96;

pub type P2 = [f64; 2];

/// Viewport: ball of the given radius around the origin in the invariant metric.
#[derive(Clone, Copy, Debug)]
pub struct Viewport {
    pub radius: f64,
}

impl Default for Viewport {
    fn default() -> Self {
        Viewport { radius: 4.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Polygon(Vec<P2>),
    Segment(P2, P2),
    Dot(P2),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub cone_id: String,
    pub span_dim: usize,
    pub shape: Shape,
}

/// Planar picture of a fan.
#[derive(Clone, Debug, PartialEq)]
pub struct SvgScene {
    pub title: String,
    pub radius: f64,
    pub cones: Vec<Region>,
    pub walls: Vec<(P2, P2)>,
    pub cores: Vec<Region>,
    pub legend: Vec<String>,
}

/// Euclidean embedding `y = L^T x` with `G = L L^T`.
struct Embedding {
    l11: f64,
    l21: f64,
    l22: f64,
}

impl Embedding {
    fn new(amb: &Ambient) -> Result<Embedding> {
        let g = |i, j| to_f64(amb.gram.get(i, j));
        let l11 = g(0, 0).sqrt();
        let l21 = g(1, 0) / l11;
        let l22 = (g(1, 1) - l21 * l21).sqrt();
        if !(l11 > 0.0 && l22 > 0.0) {
            return Err(ChambrierError::Invariant("gram matrix is not positive definite".into()));
        }
        Ok(Embedding { l11, l21, l22 })
    }

    fn point(&self, x: &[Q]) -> P2 {
        let (a, b) = (to_f64(&x[0]), to_f64(&x[1]));
        [self.l11 * a + self.l21 * b, self.l22 * b]
    }

    /// Normal of a form in embedded coordinates: `L^{-1} c`.
    fn normal(&self, f: &LinForm) -> P2 {
        let n1 = to_f64(&f.coeffs[0]) / self.l11;
        [n1, (to_f64(&f.coeffs[1]) - self.l21 * n1) / self.l22]
    }
}

fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn scaled(a: P2, s: f64) -> P2 {
    [a[0] * s, a[1] * s]
}

fn unit(a: P2) -> P2 {
    scaled(a, 1.0 / dot(a, a).sqrt())
}

/// Keeps the part of a convex polygon where `n . y >= 0`.
fn clip(poly: &[P2], n: P2) -> Vec<P2> {
    let mut out = Vec::new();
    for (k, &a) in poly.iter().enumerate() {
        let b = poly[(k + 1) % poly.len()];
        let (da, db) = (dot(n, a), dot(n, b));
        if da >= 0.0 {
            out.push(a);
        }
        if (da >= 0.0) != (db >= 0.0) {
            let t = da / (da - db);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

fn disk(radius: f64) -> Vec<P2> {
    (0..DISK_SIDES)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / DISK_SIDES as f64;
            [radius * th.cos(), radius * th.sin()]
        })
        .collect()
}

fn shape_of(cone: &Cone, emb: &Embedding, radius: f64) -> Shape {
    match cone.span_dim {
        0 => Shape::Dot([0.0, 0.0]),
        1 => {
            let u = &cone.span_basis()[0];
            let mut d = unit(emb.point(u));
            match cone.gt_forms().first() {
                Some(f) => {
                    if f.eval(u) < Q::from_integer(0.into()) {
                        d = scaled(d, -1.0);
                    }
                    Shape::Segment([0.0, 0.0], scaled(d, radius))
                }
                None => Shape::Segment(scaled(d, -radius), scaled(d, radius)),
            }
        }
        _ => Shape::Polygon(cone.gt_forms().iter().fold(disk(radius), |p, f| clip(&p, emb.normal(f)))),
    }
}

/// Renders a rank-2 fan; with `cores`, also every core smaller than its cone.
pub fn render_fan(fan: &Fan, amb: &Ambient, viewport: Viewport, cores: bool) -> Result<SvgScene> {
    if fan.dim != 2 || amb.dim != 2 {
        return Err(ChambrierError::RankUnsupported(fan.dim));
    }
    let emb = Embedding::new(amb)?;
    let r = viewport.radius;
    let mut order: Vec<usize> = (0..fan.len()).collect();
    order.sort_by(|&a, &b| fan.cones[b].span_dim.cmp(&fan.cones[a].span_dim).then(fan.cones[a].id.cmp(&fan.cones[b].id)));
    let cones: Vec<Region> = order
        .iter()
        .map(|&i| Region { cone_id: fan.cones[i].id.clone(), span_dim: fan.cones[i].span_dim, shape: shape_of(&fan.cones[i], &emb, r) })
        .collect();
    let walls = amb
        .walls
        .iter()
        .map(|w| {
            let n = emb.normal(w);
            let d = unit([-n[1], n[0]]);
            (scaled(d, -r), scaled(d, r))
        })
        .collect();
    let mut core_regions: Vec<Region> = Vec::new();
    if cores {
        for &i in &order {
            let c = core(fan, amb, i)?;
            let smaller = c.core_cone.id != fan.cones[i].id || c.core_cone.span_dim == 0;
            if smaller && !core_regions.iter().any(|g| g.cone_id == c.core_cone.id) {
                core_regions.push(Region { cone_id: c.core_cone.id.clone(), span_dim: c.core_cone.span_dim, shape: shape_of(&c.core_cone, &emb, r) });
            }
        }
    }
    let title = format!("{} J={{{}}}", fan.label, fan.j_string());
    let mut legend = vec![title.clone(), format!("{} cones", cones.len())];
    if cores {
        legend.push(format!("{} cores hatched", core_regions.len()));
    }
    Ok(SvgScene { title, radius: r, cones, walls, cores: core_regions, legend })
}

const FILLS: [&str; 3] = ["#222222", "#3366aa", "#dde6f2"];

fn num(x: f64) -> String {
    // avoid "-0.000000"
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.000000".to_string()
    } else {
        s
    }
}

fn pt(p: P2) -> String {
    format!("{},{}", num(p[0]), num(-p[1]))
}

fn element(out: &mut String, reg: &Region, class: &str, fill: &str, stroke: &str, width: f64) {
    let attrs = format!("class=\"{class}\" data-cone=\"{}\" data-dim=\"{}\"", reg.cone_id, reg.span_dim);
    let w = num(width);
    let _ = match &reg.shape {
        Shape::Polygon(ps) => writeln!(
            out,
            "  <polygon {attrs} points=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"{w}\"/>",
            ps.iter().map(|&p| pt(p)).collect::<Vec<_>>().join(" ")
        ),
        Shape::Segment(a, b) => writeln!(
            out,
            "  <line {attrs} x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{w}\"/>",
            num(a[0]),
            num(-a[1]),
            num(b[0]),
            num(-b[1])
        ),
        Shape::Dot(p) => writeln!(out, "  <circle {attrs} cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>", num(p[0]), num(-p[1]), num(3.0 * width)),
    };
}

impl SvgScene {
    pub fn to_svg(&self) -> String {
        let m = self.radius + 1.0;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"{} {} {} {}\">",
            num(-m),
            num(-m),
            num(2.0 * m),
            num(2.0 * m)
        );
        let _ = writeln!(s, "<title>{}</title>", self.title);
        s.push_str("<defs>\n  <pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"0.2\" height=\"0.2\" patternTransform=\"rotate(45)\">\n    <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"0.2\" stroke=\"#aa3322\" stroke-width=\"0.06\"/>\n  </pattern>\n</defs>\n");
        s.push_str("<g id=\"cones\">\n");
        for reg in &self.cones {
            let fill = FILLS[reg.span_dim.min(2)];
            element(&mut s, reg, "cone", fill, if reg.span_dim == 2 { "#ffffff" } else { fill }, 0.03);
        }
        s.push_str("</g>\n<g id=\"walls\">\n");
        for (a, b) in &self.walls {
            let _ = writeln!(
                s,
                "  <line class=\"wall\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888888\" stroke-width=\"0.01\" stroke-dasharray=\"0.08 0.08\"/>",
                num(a[0]),
                num(-a[1]),
                num(b[0]),
                num(-b[1])
            );
        }
        s.push_str("</g>\n<g id=\"cores\">\n");
        for reg in &self.cores {
            element(&mut s, reg, "core", "url(#hatch)", "url(#hatch)", 0.12);
        }
        s.push_str("</g>\n<g id=\"legend\" font-size=\"0.25\" font-family=\"sans-serif\">\n");
        for (k, line) in self.legend.iter().enumerate() {
            let _ = writeln!(s, "  <text x=\"{}\" y=\"{}\">{line}</text>", num(-m + 0.1), num(-m + 0.3 + 0.3 * k as f64));
        }
        s.push_str("</g>\n</svg>\n");
        s
    }

    /// Number of elements of class `cone`, one per cone.
    pub fn region_count(&self) -> usize {
        self.cones.len()
    }
}

/// Counts the elements of a rendered SVG carrying the given class.
pub fn count_class(svg: &str, class: &str) -> usize {
    svg.matches(&format!("class=\"{class}\"")).count()
}

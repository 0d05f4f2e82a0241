//! Compactification of the truncated regular tree by its ends.
//!
//! A cone of the tree is either a point (direction `{0}`) or an open ray `v + ]0, oo[`
//! towards an end. A ray is fixed pointwise by its stabilizer, so it is its own core and
//! its building cone is the ray itself. The base of a ray from `v` is the half-open first
//! edge `]v, v1]`: the intersection of the ray with the half-apartments containing a
//! neighborhood of `v` in it. Every apartment through that edge carries the ray's
//! neighborhood onto the branch behind `v` through `v1`, so the neighborhood of a ray
//! does not depend on the radius.

use num_traits::Signed;
use serde::Serialize;
use std::collections::BTreeSet;

use crate::building_kernel::{chamber_distance, median, vertex_distance, Chamber, LineEnd, TreeApartment, TreeBuilding, TreeRay, Vertex};
use crate::error::{ChambrierError, Result};
use crate::exact_geometry::{q, Q};

/// Point of the compactified tree: a vertex, the midpoint of a chamber, or an end.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TreePoint {
    Vertex(Vertex),
    Chamber(Chamber),
    /// End through a boundary vertex of the window.
    End(Vertex),
}

/// Cone of the tree: a point of the tree, or an open ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TreeCone {
    Point(TreePoint),
    Ray(TreeRay),
}

/// Point of the compactified apartment line: integer positions of vertices and chambers,
/// or one of the two ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LinePoint {
    Vertex(i64),
    Chamber(i64),
    End(LineEnd),
}

impl TreePoint {
    pub fn is_interior(&self) -> bool {
        !matches!(self, TreePoint::End(_))
    }

    pub fn name(&self) -> String {
        match self {
            TreePoint::Vertex(v) => v.name(),
            TreePoint::Chamber(c) => c.name(),
            TreePoint::End(b) => format!("end({})", b.name()),
        }
    }
}

fn check_point(t: &TreeBuilding, x: &TreePoint) -> Result<()> {
    let ok = match x {
        TreePoint::Vertex(v) => t.contains(v),
        TreePoint::Chamber(c) => t.contains_chamber(c),
        TreePoint::End(b) => t.contains(b) && t.is_boundary(b),
    };
    if ok {
        Ok(())
    } else {
        Err(ChambrierError::Validation(format!("{} is not a point of the window", x.name())))
    }
}

/// Every point of the window: vertices, chambers and ends.
pub fn points(t: &TreeBuilding) -> Vec<TreePoint> {
    let mut out: Vec<TreePoint> = t.vertices().into_iter().map(TreePoint::Vertex).collect();
    out.extend(t.chambers().into_iter().map(TreePoint::Chamber));
    out.extend(t.boundary().into_iter().map(TreePoint::End));
    out
}

/// Twice the distance between two interior points.
pub fn half_distance(x: &TreePoint, y: &TreePoint) -> Result<usize> {
    let vc = |v: &Vertex, c: &Chamber| {
        let (a, b) = c.endpoints();
        2 * vertex_distance(v, &a).min(vertex_distance(v, &b)) + 1
    };
    match (x, y) {
        (TreePoint::Vertex(a), TreePoint::Vertex(b)) => Ok(2 * vertex_distance(a, b)),
        (TreePoint::Vertex(v), TreePoint::Chamber(c)) | (TreePoint::Chamber(c), TreePoint::Vertex(v)) => Ok(vc(v, c)),
        (TreePoint::Chamber(c), TreePoint::Chamber(d)) => Ok(2 * chamber_distance(c, d)),
        _ => Err(ChambrierError::Validation("ends are at infinite distance".into())),
    }
}

/// Cone with the given data, validated against the window.
pub fn tree_cone(t: &TreeBuilding, c: TreeCone) -> Result<TreeCone> {
    match &c {
        TreeCone::Point(x) => {
            check_point(t, x)?;
            if !x.is_interior() {
                return Err(ChambrierError::Validation("a point cone needs an interior point".into()));
            }
        }
        TreeCone::Ray(r) => {
            t.ray(&r.origin, &r.end)?;
        }
    }
    Ok(c)
}

/// Vertex of a cone.
pub fn apex(c: &TreeCone) -> TreePoint {
    match c {
        TreeCone::Point(x) => x.clone(),
        TreeCone::Ray(r) => TreePoint::Vertex(r.origin.clone()),
    }
}

/// Points of the building cone inside the window. For a ray: the open ray, that is its
/// vertices past the origin and its chambers.
pub fn cone_points(t: &TreeBuilding, c: &TreeCone) -> Result<BTreeSet<TreePoint>> {
    let c = tree_cone(t, c.clone())?;
    Ok(match c {
        TreeCone::Point(x) => BTreeSet::from([x]),
        TreeCone::Ray(r) => {
            let path = t.ray_vertices(&r);
            let mut out: BTreeSet<TreePoint> = path[1..].iter().cloned().map(TreePoint::Vertex).collect();
            for w in path.windows(2) {
                out.insert(TreePoint::Chamber(Chamber::between(&w[0], &w[1]).expect("consecutive vertices")));
            }
            out
        }
    })
}

/// Base of a ray: its first edge, closed at the far end and open at the origin.
pub fn base_edge(t: &TreeBuilding, r: &TreeRay) -> Result<(Vertex, Vertex)> {
    t.ray(&r.origin, &r.end)?;
    let path = t.ray_vertices(r);
    Ok((path[0].clone(), path[1].clone()))
}

/// Whether two cones are equivalent: some ray is a parallel subcone of both.
///
/// Rays: a common subray must end at both ends, and the ray from the median of the two
/// origins and the end is one whenever the ends agree. Point cones are equivalent only to
/// themselves, and never to a ray, which is not parallel to them.
pub fn cone_equiv(t: &TreeBuilding, a: &TreeCone, b: &TreeCone) -> Result<bool> {
    let a = tree_cone(t, a.clone())?;
    let b = tree_cone(t, b.clone())?;
    match (&a, &b) {
        (TreeCone::Point(x), TreeCone::Point(y)) => Ok(x == y),
        (TreeCone::Ray(r1), TreeCone::Ray(r2)) => {
            if !t.parallel(r1, r2)? {
                return Ok(false);
            }
            let m = median(&r1.origin, &r2.origin, &r1.end);
            if m == r1.end {
                return Err(ChambrierError::WindowExhausted("common subray leaves the window".into()));
            }
            let h = TreeRay { origin: m, end: r1.end.clone() };
            Ok(t.is_subray(&h, r1) && t.is_subray(&h, r2))
        }
        _ => Ok(false),
    }
}

/// Class of a cone in the compactification.
pub fn class_of(t: &TreeBuilding, c: &TreeCone) -> Result<TreePoint> {
    Ok(match tree_cone(t, c.clone())? {
        TreeCone::Point(x) => x,
        TreeCone::Ray(r) => TreePoint::End(r.end),
    })
}

/// Whether `w` is `v` or lies below it, away from the base edge.
fn at_or_below(v: &Vertex, w: &Vertex) -> bool {
    v.side == w.side && w.digits.starts_with(&v.digits)
}

/// Whether `x` lies in the branch behind `v` through its neighbor `v1`.
fn in_branch(v: &Vertex, v1: &Vertex, x: &TreePoint) -> bool {
    let down = v1.side == v.side && v1.depth() == v.depth() + 1 && at_or_below(v, v1);
    let through = |w: &Vertex| if down { at_or_below(v1, w) } else { !at_or_below(v, w) };
    match x {
        TreePoint::Vertex(w) | TreePoint::End(w) => through(w),
        TreePoint::Chamber(c) => {
            let (a, b) = c.endpoints();
            (a == *v || through(&a)) && (b == *v || through(&b))
        }
    }
}

fn check_radius(r: &Q) -> Result<()> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(ChambrierError::Validation("neighborhood radius must be positive".into()))
    }
}

/// Membership of `x` in the neighborhood of the cone `c` fattened by the open ball of radius `r`.
///
/// Point cone at `y`: the interior points at distance less than `r` from `y`. Ray from `v`:
/// in each apartment through the base edge `[v, v1]`, the fattened ray cut by the star of
/// the ray's core is `]v, oo[`; its images sweep the branch behind `v` through `v1`, and an
/// end belongs to the neighborhood when one of its rays lies in that branch.
pub fn neighborhood_contains(t: &TreeBuilding, c: &TreeCone, r: &Q, x: &TreePoint) -> Result<bool> {
    check_radius(r)?;
    check_point(t, x)?;
    match tree_cone(t, c.clone())? {
        TreeCone::Point(y) => {
            if !x.is_interior() {
                return Ok(false);
            }
            Ok(Q::from_integer(half_distance(&y, x)?.into()) < q(2) * r)
        }
        TreeCone::Ray(ray) => {
            let (v, v1) = base_edge(t, &ray)?;
            Ok(in_branch(&v, &v1, x))
        }
    }
}

/// Same union without cutting by the star of the core: in each apartment through the base,
/// the image of the fattened ray `]v - r, oo[`. Differs from the neighborhood only within
/// `r` of the origin and never on ends.
pub fn neighborhood_without_star(t: &TreeBuilding, c: &TreeCone, r: &Q, x: &TreePoint) -> Result<bool> {
    check_radius(r)?;
    check_point(t, x)?;
    match tree_cone(t, c.clone())? {
        TreeCone::Point(_) => neighborhood_contains(t, c, r, x),
        TreeCone::Ray(ray) => {
            let (v, v1) = base_edge(t, &ray)?;
            if in_branch(&v, &v1, x) {
                return Ok(true);
            }
            if !x.is_interior() {
                return Ok(false);
            }
            Ok(Q::from_integer(half_distance(&TreePoint::Vertex(v), x)?.into()) < q(2) * r)
        }
    }
}

/// Neighborhoods `(c1, r1)` and `(c2, r2)` of two distinct points sharing no point.
///
/// Interior points: balls of radius half their distance. An interior point and an end:
/// a small ball around the point, and the ray towards the end from the vertex of the point
/// nearest to it. Two ends: the rays towards each from a vertex of the geodesic joining them.
/// An end and a point touching its boundary vertex need a larger window.
pub fn separate(t: &TreeBuilding, x: &TreePoint, y: &TreePoint) -> Result<((TreeCone, Q), (TreeCone, Q))> {
    check_point(t, x)?;
    check_point(t, y)?;
    if x == y {
        return Err(ChambrierError::Validation("points coincide".into()));
    }
    let near = |p: &TreePoint, b: &Vertex| -> Vertex {
        match p {
            TreePoint::Vertex(v) => v.clone(),
            TreePoint::Chamber(c) => {
                let (a1, a2) = c.endpoints();
                if vertex_distance(&a1, b) < vertex_distance(&a2, b) {
                    a1
                } else {
                    a2
                }
            }
            TreePoint::End(_) => unreachable!("interior point expected"),
        }
    };
    match (x, y) {
        (TreePoint::End(b1), TreePoint::End(b2)) => {
            let m = median(&Vertex::root(0), b1, b2);
            Ok((
                (TreeCone::Ray(t.ray(&m, b1)?), q(1)),
                (TreeCone::Ray(t.ray(&m, b2)?), q(1)),
            ))
        }
        (p, TreePoint::End(b)) => Ok(((TreeCone::Point(p.clone()), q(1) / q(4)), (TreeCone::Ray(t.ray(&near(p, b), b)?), q(1)))),
        (TreePoint::End(b), p) => Ok(((TreeCone::Ray(t.ray(&near(p, b), b)?), q(1)), (TreeCone::Point(p.clone()), q(1) / q(4)))),
        _ => {
            let r = Q::new(half_distance(x, y)?.into(), 4.into());
            Ok(((TreeCone::Point(x.clone()), r.clone()), (TreeCone::Point(y.clone()), r)))
        }
    }
}

/// Extension of the retraction onto `a` centered at `c` to vertices and ends.
pub fn extend_retraction(t: &TreeBuilding, a: &TreeApartment, c: &Chamber, x: &TreePoint) -> Result<LinePoint> {
    check_point(t, x)?;
    match x {
        TreePoint::Chamber(d) => Ok(LinePoint::Chamber(t.retract(a, c, d)?)),
        TreePoint::End(b) => Ok(LinePoint::End(t.retract_end(a, c, b)?)),
        TreePoint::Vertex(v) => {
            let i = a
                .chamber_position(c)
                .ok_or_else(|| ChambrierError::Validation(format!("chamber {} is not in the apartment", c.name())))?
                as i64;
            let dl = vertex_distance(&a.vertices[i as usize], v) as i64;
            let dr = vertex_distance(&a.vertices[i as usize + 1], v) as i64;
            Ok(LinePoint::Vertex(if dl < dr { i - dl } else { i + 1 + dr }))
        }
    }
}

/// Reflection of the apartment line in the vertex at position `m`.
pub fn reflect(m: i64, p: LinePoint) -> LinePoint {
    match p {
        LinePoint::Vertex(i) => LinePoint::Vertex(2 * m - i),
        LinePoint::Chamber(i) => LinePoint::Chamber(2 * m - i - 1),
        LinePoint::End(e) => LinePoint::End(e.flip()),
    }
}

/// Whether a point of the line lies in the closed half-line `<= m` (`minus`) or `>= m`.
pub fn on_side(m: i64, minus: bool, p: LinePoint) -> bool {
    match (p, minus) {
        (LinePoint::Vertex(i), true) => i <= m,
        (LinePoint::Vertex(i), false) => i >= m,
        (LinePoint::Chamber(i), true) => i < m,
        (LinePoint::Chamber(i), false) => i >= m,
        (LinePoint::End(e), true) => e == LineEnd::Minus,
        (LinePoint::End(e), false) => e == LineEnd::Plus,
    }
}

/// Classes of rays parallel to `r`: the points of the facade of `r`. Rays towards a common
/// end are all equivalent, so there is exactly one.
pub fn facade_classes(t: &TreeBuilding, r: &TreeRay) -> Result<usize> {
    t.ray(&r.origin, &r.end)?;
    let mut reps: Vec<TreeCone> = Vec::new();
    for v in t.vertices() {
        if v == r.end {
            continue;
        }
        let g = TreeRay { origin: v, end: r.end.clone() };
        if !t.parallel(&g, r)? {
            continue;
        }
        let g = TreeCone::Ray(g);
        let mut fresh = true;
        for h in &reps {
            if cone_equiv(t, h, &g)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            reps.push(g);
        }
    }
    Ok(reps.len())
}

//! Exhaustive tree checks shared by the integration tests and the acceptance suite. Each
//! returns the number of instances checked, or a description of the first failure.
#![allow(dead_code)]

use super::oracles::EndsOracle;
use chambrier::building_compactification::tree::{self as ctree, TreeCone, TreePoint};
use chambrier::building_compactification::{extend_retraction, reflect};
use chambrier::building_kernel::{chamber_distance, vertex_distance, Chamber, TreeApartment, TreeBuilding, TreeRay, Vertex};
use chambrier::exact_geometry::q;
use std::collections::{BTreeSet, HashMap};

/// Runs `f` over the items on all available threads and sums the counts.
pub fn par_sum<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<usize, String> + Sync) -> Result<usize, String> {
    let n = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).max(1);
    let chunk = items.len().div_ceil(n).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                s.spawn(move || part.iter().try_fold(0usize, |acc, x| f(x).map(|c| acc + c)))
            })
            .collect();
        handles.into_iter().try_fold(0usize, |acc, h| h.join().expect("worker panicked").map(|c| acc + c))
    })
}

/// Whether a set of vertices lies on one geodesic: with `a, b` at maximal distance, every
/// point must sit between them.
pub fn on_one_geodesic(vs: &[Vertex]) -> bool {
    let mut best = (0, 0, 0);
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let d = vertex_distance(&vs[i], &vs[j]);
            if d > best.0 {
                best = (d, i, j);
            }
        }
    }
    let (d, i, j) = best;
    vs.iter().all(|v| vertex_distance(&vs[i], v) + vertex_distance(v, &vs[j]) == d)
}

/// Vertices a point forces into an apartment containing it.
fn anchor(x: &TreePoint) -> Vec<Vertex> {
    match x {
        TreePoint::Vertex(v) | TreePoint::End(v) => vec![v.clone()],
        TreePoint::Chamber(c) => {
            let (a, b) = c.endpoints();
            vec![a, b]
        }
    }
}

/// Adjacent chamber pairs `(c1, c2)` in both orders.
pub fn adjacent_pairs(t: &TreeBuilding) -> Vec<(Chamber, Chamber)> {
    let mut out = Vec::new();
    for v in t.vertices() {
        let cs = t.chambers_at(&v);
        for a in &cs {
            for b in &cs {
                if a != b {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
    }
    out
}

/// Retraction trichotomy for chambers and its extension to vertices and ends.
///
/// For adjacent `c1, c2` in `A` with common wall at position `m`: `rho2(x)` is `rho1(x)`
/// or its mirror; they agree when `rho1(x)` is on the side of `c1`; otherwise they agree
/// iff some apartment contains `c1`, `c2` and `x`, which for chambers also reads
/// `d(c1, c2) + d(c2, x) = d(c1, x)`.
pub fn retraction_trichotomy(qq: usize, r: usize) -> Result<usize, String> {
    let t = TreeBuilding::new(qq, r).map_err(|e| e.to_string())?;
    let mut pts: Vec<TreePoint> = t.chambers().into_iter().map(TreePoint::Chamber).collect();
    pts.extend(t.vertices().into_iter().map(TreePoint::Vertex));
    pts.extend(t.boundary().into_iter().map(TreePoint::End));
    let pairs = adjacent_pairs(&t);
    par_sum(&pairs, |(c1, c2)| {
        let a: TreeApartment = t.apartment_containing(c1, c2).map_err(|e| e.to_string())?;
        let p1 = a.chamber_position(c1).unwrap() as i64;
        let p2 = a.chamber_position(c2).unwrap() as i64;
        let m = p1.max(p2);
        let minus = p1 < p2;
        let (u1, u2) = c1.endpoints();
        let (w1, w2) = c2.endpoints();
        let mut count = 0;
        for x in &pts {
            let r1 = extend_retraction(&t, &a, c1, x).map_err(|e| e.to_string())?;
            let r2 = extend_retraction(&t, &a, c2, x).map_err(|e| e.to_string())?;
            let fail = |what: &str| Err(format!("{what}: c1={} c2={} x={} rho1={r1:?} rho2={r2:?}", c1.name(), c2.name(), x.name()));
            if r2 != r1 && r2 != reflect(m, r1) {
                return fail("neither equal nor mirrored");
            }
            if ctree::on_side(m, minus, r1) {
                if r2 != r1 {
                    return fail("differ on the side of c1");
                }
            } else {
                let mut vs = vec![u1.clone(), u2.clone(), w1.clone(), w2.clone()];
                vs.extend(anchor(x));
                let common = on_one_geodesic(&vs);
                if (r1 == r2) != common {
                    return fail("agreement differs from a common apartment");
                }
                if let TreePoint::Chamber(d) = x {
                    let between = chamber_distance(c1, c2) + chamber_distance(c2, d) == chamber_distance(c1, d);
                    if (r1 == r2) != between {
                        return fail("agreement differs from c2 in the enclos of c1 and x");
                    }
                }
            }
            count += 1;
        }
        Ok(count)
    })
}

fn check_two_rays(t: &TreeBuilding, r1: &TreeRay, r2: &TreeRay) -> Result<(Vertex, Vertex), String> {
    let (s1, s2, apt) = t.rays_common_apartment(r1, r2).map_err(|e| e.to_string())?;
    let bad = |w: &str| Err(format!("{w}: {r1:?} {r2:?}"));
    if !t.is_subray(&s1, r1) || !t.is_subray(&s2, r2) {
        return bad("not subrays");
    }
    for s in [&s1, &s2] {
        if t.ray_vertices(s).iter().any(|v| apt.vertex_position(v).is_none()) {
            return bad("subray leaves the apartment");
        }
    }
    let (first, last) = (&apt.vertices[0], apt.vertices.last().unwrap());
    if !t.is_boundary(first) || !t.is_boundary(last) || vertex_distance(first, last) + 1 != apt.len() {
        return bad("not an apartment");
    }
    if apt.vertices.windows(2).any(|p| vertex_distance(&p[0], &p[1]) != 1) {
        return bad("not a path");
    }
    Ok((s1.origin, s2.origin))
}

/// Two rays have subrays in a common apartment, with the same subray origins at radius `r + 1`.
/// Every pair of ends is combined with origins `origins` on both rays.
pub fn two_rays(qq: usize, r: usize, origins: &[Vertex]) -> Result<usize, String> {
    let t = TreeBuilding::new(qq, r).map_err(|e| e.to_string())?;
    let t1 = TreeBuilding::new(qq, r + 1).map_err(|e| e.to_string())?;
    let ends = t.boundary();
    par_sum(&ends, |e1| {
        let mut count = 0;
        for e2 in &ends {
            for o1 in origins {
                for o2 in origins {
                    let r1 = t.ray(o1, e1).map_err(|e| e.to_string())?;
                    let r2 = t.ray(o2, e2).map_err(|e| e.to_string())?;
                    let at_r = check_two_rays(&t, &r1, &r2)?;
                    let at_r1 = check_two_rays(&t1, &TreeBuilding::refine_ray(&r1), &TreeBuilding::refine_ray(&r2))?;
                    if at_r != at_r1 {
                        return Err(format!("subray origins change with the radius: {r1:?} {r2:?}"));
                    }
                    count += 1;
                }
            }
        }
        Ok(count)
    })
}

/// Name of a point in the oracle's vocabulary.
pub fn point_name(x: &TreePoint) -> String {
    match x {
        TreePoint::Vertex(v) => format!("v:{}", v.name()),
        TreePoint::Chamber(c) => {
            let (a, b) = c.endpoints();
            let (a, b) = (a.name(), b.name());
            if a < b {
                format!("e:{a}|{b}")
            } else {
                format!("e:{b}|{a}")
            }
        }
        TreePoint::End(b) => format!("end:{}", b.name()),
    }
}

/// Compactified tree against the classical end space: the same points, classes of rays
/// matching ends, ball neighborhoods of interior points, and identical neighborhood bases of
/// ends (hence mutually refining), decreasing along each ray.
pub fn ends_compactification(qq: usize, r: usize) -> Result<usize, String> {
    let t = TreeBuilding::new(qq, r).map_err(|e| e.to_string())?;
    let oracle = EndsOracle::new(qq, r);
    let pts = ctree::points(&t);
    let names: BTreeSet<String> = pts.iter().map(point_name).collect();
    if names.len() != pts.len() || names != oracle.point_names() {
        return Err("point sets differ".into());
    }
    let err = |e: chambrier::ChambrierError| e.to_string();
    let one = q(1);

    // Classes of rays are the ends.
    let leaves = oracle.g.leaves();
    let reps: Vec<TreeCone> = leaves.iter().map(|b| TreeCone::Ray(TreeRay { origin: b.up(), end: b.clone() })).collect();
    for (b, rep) in leaves.iter().zip(&reps) {
        if ctree::class_of(&t, rep).map_err(err)? != TreePoint::End(b.clone()) {
            return Err(format!("class of a ray to {b} is not its end"));
        }
    }
    let sample: Vec<Vertex> = t.vertices().into_iter().filter(|v| v.depth() <= 1).collect();
    for (i, b) in leaves.iter().enumerate() {
        for o in sample.iter().filter(|o| *o != b) {
            let g = TreeCone::Ray(t.ray(o, b).map_err(err)?);
            if !ctree::cone_equiv(&t, &g, &reps[i]).map_err(err)? {
                return Err(format!("rays to {b} are not equivalent"));
            }
            let other = &reps[(i + 1) % reps.len()];
            if ctree::cone_equiv(&t, &g, other).map_err(err)? {
                return Err(format!("rays to distinct ends are equivalent at {b}"));
            }
        }
    }

    // Balls around interior points near the base.
    let near: Vec<TreePoint> = pts.iter().filter(|x| x.is_interior() && anchor(x).iter().all(|v| v.depth() <= 1)).cloned().collect();
    for x in &near {
        for k in 1..=4usize {
            let rad = q(k as i64) / q(2);
            let ours: BTreeSet<String> = pts
                .iter()
                .filter(|y| ctree::neighborhood_contains(&t, &TreeCone::Point(x.clone()), &rad, y).unwrap())
                .map(point_name)
                .collect();
            if ours != oracle.ball(&anchor(x), k) {
                return Err(format!("ball of radius {rad} around {} differs", x.name()));
            }
        }
    }

    // Basic neighborhoods of ends, one per directed edge.
    let mut count = 0;
    let vertices = t.vertices();
    let mut directed: Vec<(Vertex, Vertex)> = Vec::new();
    for v in &vertices {
        for w in t.neighbors(v) {
            directed.push((v.clone(), w));
        }
    }
    let same: HashMap<(Vertex, Vertex), bool> = {
        let flags: Vec<bool> = {
            let results = std::sync::Mutex::new(vec![false; directed.len()]);
            let idx: Vec<usize> = (0..directed.len()).collect();
            par_sum(&idx, |&i| {
                let (v, w) = &directed[i];
                let Some(end) = oracle.some_end_through(v, w) else { return Ok(0) };
                let cone = TreeCone::Ray(t.ray(v, &end).map_err(err)?);
                let ours: BTreeSet<String> =
                    pts.iter().filter(|y| ctree::neighborhood_contains(&t, &cone, &one, y).unwrap()).map(point_name).collect();
                results.lock().unwrap()[i] = ours == oracle.basic_open(v, w);
                Ok(1)
            })?;
            results.into_inner().unwrap()
        };
        directed.iter().cloned().zip(flags).collect()
    };
    let stride = (leaves.len() / 16).max(1);
    for (i, b) in leaves.iter().enumerate() {
        let first = oracle.first_steps_to(b);
        let path = oracle.g.path(&Vertex::root(0), b);
        for v in &vertices {
            if v == b {
                continue;
            }
            let cone = t.ray(v, b).map_err(err)?;
            let base = ctree::base_edge(&t, &cone).map_err(err)?;
            if base.1 != first[v] || !same[&base] {
                return Err(format!("neighborhood of the ray from {v} to {b} differs from the classical one"));
            }
            count += 1;
        }
        if i % stride != 0 {
            continue;
        }
        for pair in path.windows(2).filter(|p| p[1] != *b) {
            let outer = TreeCone::Ray(t.ray(&pair[0], b).map_err(err)?);
            let inner = TreeCone::Ray(t.ray(&pair[1], b).map_err(err)?);
            for y in &pts {
                let yi = ctree::neighborhood_contains(&t, &inner, &one, y).map_err(err)?;
                if yi && !ctree::neighborhood_contains(&t, &outer, &one, y).map_err(err)? {
                    return Err(format!("neighborhoods along the ray to {b} are not decreasing"));
                }
            }
        }
    }
    Ok(count)
}

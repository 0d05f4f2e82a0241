mod common;

use chambrier::building_kernel::*;
use chambrier::exact_geometry::linalg::{add, scale};
use chambrier::exact_geometry::*;
use chambrier::fan_kernel::arrangement::arrangement_faces;
use chambrier::polyhedra::{Rel, Row, System};
use chambrier::ChambrierError;
use common::oracles::*;
use rand::Rng;
use std::collections::BTreeSet;

fn window(label: &str, r: usize) -> AlcoveWindow {
    AlcoveWindow::new(&build_root_system(label).unwrap(), r).unwrap()
}

fn weyl_facet_signs(win: &AlcoveWindow) -> Vec<Vec<Sign>> {
    arrangement_faces(win.dim(), win.roots()).into_iter().map(|f| f.signs).collect()
}

#[test]
fn windows_match_realizable_floor_vectors() {
    for (label, r) in [("A1", 5), ("A2", 4), ("B2", 3), ("G2", 3), ("A1xA1", 3)] {
        let win = window(label, r);
        let expected: BTreeSet<Vec<i64>> = l1_ball(win.roots().len(), r as i64)
            .into_iter()
            .map(|mut k| {
                for (x, y) in k.iter_mut().zip(&win.alcoves[0].floors) {
                    *x += y;
                }
                k
            })
            .filter(|k| floors_realizable(&win, k))
            .collect();
        let got: BTreeSet<Vec<i64>> = win.alcoves.iter().map(|a| a.floors.clone()).collect();
        assert_eq!(got, expected, "{label} R={r}");
        for (i, a) in win.alcoves.iter().enumerate() {
            assert_eq!(a.neighbors.len(), win.num_types());
            for (t, n) in a.neighbors.iter().enumerate() {
                match n {
                    Some(j) => {
                        assert_eq!(win.alcoves[*j].neighbors[t], Some(i), "adjacency is symmetric");
                        assert_eq!(win.distance(i, *j), 1);
                    }
                    None => assert!(win.distance(0, i) == r, "only the outer layer has missing panels"),
                }
            }
        }
    }
    assert_eq!(window("A1", 5).len(), 11);
}

#[test]
fn minimal_gallery_examples() {
    let win = window("A1", 5);
    let g = win.minimal_gallery(0, 0).unwrap();
    assert!(g.is_empty());
    let n = win.alcoves[0].neighbors[0].unwrap();
    assert_eq!(win.minimal_gallery(0, n).unwrap().types, vec![0]);
    let far = (0..win.len()).find(|&i| win.distance(0, i) == 3).unwrap();
    let g = win.minimal_gallery(0, far).unwrap();
    assert_eq!(g.len(), 3);
    assert!(g.types.windows(2).all(|p| p[0] != p[1]), "letters alternate: {:?}", g.types);
    let err = win.minimal_gallery(far, (0..win.len()).find(|&i| win.distance(0, i) == 5 && win.distance(far, i) == 8).unwrap());
    assert!(err.is_ok(), "a straight gallery through the base stays inside");
}

#[test]
fn minimal_gallery_length_is_wall_count() {
    for (label, r) in [("A1", 6), ("A2", 5), ("B2", 4), ("G2", 4), ("A1xA1", 4)] {
        let win = window(label, r);
        let inner: Vec<usize> = (0..win.len()).filter(|&i| win.distance(0, i) <= r / 2).collect();
        for &c in &inner {
            let bfs = win.window_distances(c);
            for &d in &inner {
                let g = win.minimal_gallery(c, d).unwrap();
                let walls = walls_between_points(&win, &win.interior_point(c), &win.interior_point(d));
                assert_eq!(g.len(), walls, "{label}: {c}->{d}");
                assert_eq!(Some(g.len()), bfs[d]);
                assert!(win.is_tense(&g.chambers));
                assert_eq!(g.chambers.first(), Some(&c));
                assert_eq!(g.chambers.last(), Some(&d));
            }
        }
    }
}

#[test]
fn minimal_gallery_reports_exhaustion() {
    let win = window("A2", 2);
    let outer: Vec<usize> = (0..win.len()).filter(|&i| win.distance(0, i) == 2).collect();
    let mut exhausted = false;
    for &a in &outer {
        for &b in &outer {
            match win.minimal_gallery(a, b) {
                Ok(g) => assert_eq!(g.len(), win.distance(a, b)),
                Err(ChambrierError::WindowExhausted(_)) => exhausted = true,
                Err(e) => panic!("{e}"),
            }
        }
    }
    assert!(exhausted, "some geodesics between outer alcoves leave a radius-2 window");
}

#[test]
fn enclos_examples() {
    let win = window("A2", 5);
    assert_eq!(win.enclos(&[0]).unwrap(), vec![0]);
    let n = win.alcoves[0].neighbors[1].unwrap();
    let mut pair = vec![0, n];
    pair.sort();
    assert_eq!(win.enclos(&[0, n]).unwrap(), pair);
    // two alcoves around the origin at distance 3 are opposite in its star
    let star = win.star(&Facet { code: vec![0, 0, 0] }).unwrap();
    assert_eq!(star.len(), 6);
    let opp = *star.iter().find(|&&i| win.distance(0, i) == 3).unwrap();
    let hull = win.enclos(&[0, opp]).unwrap();
    assert_eq!(hull, star, "the hull of opposite alcoves of a hexagon is the hexagon");
}

#[test]
fn enclos_routes_agree_exhaustively() {
    for (label, r) in [("A1", 5), ("A2", 4)] {
        let win = window(label, r);
        let mut checked = 0;
        for a in 0..win.len() {
            for b in a..win.len() {
                match win.enclos(&[a, b]) {
                    Ok(h) => {
                        checked += 1;
                        if win.distance(0, a) + win.distance(0, b) <= r {
                            let oracle: Vec<usize> = gallery_hull_by_bfs(&win, &[a, b]).into_iter().collect();
                            assert_eq!(h, oracle);
                        }
                    }
                    Err(ChambrierError::WindowExhausted(_)) => {
                        assert!(win.distance(0, a).max(win.distance(0, b)) > r / 2);
                    }
                    Err(e) => panic!("{e}"),
                }
            }
        }
        assert!(checked > win.len());
    }
}

#[test]
fn enclos_is_idempotent_and_monotone() {
    let win = window("A2", 5);
    let mut g = common::rng(41);
    let inner: Vec<usize> = (0..win.len()).filter(|&i| win.distance(0, i) <= 1).collect();
    for _ in 0..40 {
        let k = g.gen_range(1..=3);
        let set: Vec<usize> = (0..k).map(|_| inner[g.gen_range(0..inner.len())]).collect();
        let h = win.enclos(&set).unwrap();
        assert_eq!(win.enclos(&h).unwrap(), h);
        let mut bigger = set.clone();
        bigger.push(inner[g.gen_range(0..inner.len())]);
        let hb = win.enclos(&bigger).unwrap();
        assert!(h.iter().all(|x| hb.contains(x)));
    }
}

fn faces_near(win: &AlcoveWindow, r: usize) -> Vec<Facet> {
    let mut out: BTreeSet<Facet> = BTreeSet::new();
    for i in 0..win.len() {
        if win.distance(0, i) <= r {
            out.extend(win.closure_faces(i));
        }
    }
    out.into_iter().collect()
}

#[test]
fn closure_faces_and_stars() {
    let win = window("A2", 4);
    assert_eq!(win.closure_faces(0).len(), 7);
    let win2 = window("A1xA1", 3);
    assert_eq!(win2.closure_faces(0).len(), 9);
    let g2 = window("G2", 7);
    assert_eq!(g2.closure_faces(0).len(), 7);
    for (w, near) in [(&win, 1), (&win2, 1), (&g2, 0)] {
        for f in faces_near(w, near) {
            let star: BTreeSet<usize> = w.star(&f).unwrap().into_iter().collect();
            assert_eq!(star, star_by_points(w, &f));
            let p = w.facet_point(&f).unwrap();
            assert_eq!(w.facet_of_point(&p).unwrap(), f);
        }
    }
}

#[test]
fn proj_examples() {
    let win = window("A2", 5);
    let c = win.alcove_facet(0);
    assert_eq!(win.proj(&c, &c).unwrap(), c);
    let v = Facet { code: vec![0, 0, 0] };
    assert_eq!(win.proj(&v, &v).unwrap(), v);
    // a chamber whose closure contains c projects to itself
    for f in win.closure_faces(0) {
        assert_eq!(win.proj(&f, &c).unwrap(), c);
    }
    // c a vertex, d a chamber away from it: equal by both routes, and a chamber of the star
    let d = (0..win.len()).find(|&i| win.distance(0, i) == 3 && !win.facet_in_closure(&v, i)).unwrap();
    let p = win.proj(&v, &win.alcove_facet(d)).unwrap();
    assert!(p.is_alcove());
    assert!(win.star(&v).unwrap().contains(&win.index_of_floors(&p.code.iter().map(|c| c.div_euclid(2)).collect::<Vec<_>>()).unwrap()));
}

#[test]
fn proj_routes_agree_exhaustively() {
    for (label, r, near) in [("A1", 5, 2), ("A2", 5, 1), ("B2", 5, 1)] {
        let win = window(label, r);
        let faces = faces_near(&win, near);
        for c in &faces {
            for d in &faces {
                let p = win.proj(c, d).unwrap();
                assert_eq!(p, win.proj_by_galleries(c, d).unwrap());
                assert!(win.facet_dim(&p) >= win.facet_dim(d));
                // equality of dimensions iff every wall containing d contains c
                let support = win.roots().len();
                let c_in_support = (0..support).all(|k| d.code[k] % 2 != 0 || c.code[k] == d.code[k]);
                assert_eq!(win.facet_dim(&p) == win.facet_dim(d), c_in_support, "{label} {c:?} {d:?}");
                // proj lies in the star of c and in Cl(c u d)
                assert!(win.star(c).unwrap().iter().any(|&g| win.facet_in_closure(&p, g)));
                let bc = AlcoveWindow::facet_bounds(c);
                let bd = AlcoveWindow::facet_bounds(d);
                for ((pb, cb), db) in AlcoveWindow::facet_bounds(&p).iter().zip(&bc).zip(&bd) {
                    assert!(cb.0.min(db.0) <= pb.0 && pb.1 <= cb.1.max(db.1));
                }
            }
        }
    }
}

/// Tightest integer `k` with `a >= k` on `c + f`, by exact feasibility of violations.
fn oracle_lower(win: &AlcoveWindow, c: &Facet, signs: &[Sign], root: usize, range: i64) -> Option<i64> {
    let n = win.dim();
    let mut best = None;
    for k in -range..=range {
        // x in c, v in f, a(x + v) < k
        let mut s = System::new(2 * n);
        let pad = |co: &[Q], first: bool| {
            let mut v = vec![q(0); 2 * n];
            let off = if first { 0 } else { n };
            v[off..off + n].clone_from_slice(co);
            v
        };
        for row in win.facet_system(c).rows {
            s.push(Row::new(pad(&row.a, true), row.b, row.rel));
        }
        for (r, sg) in win.roots().iter().zip(signs) {
            let co = match sg {
                Sign::Pos => r.coeffs.clone(),
                Sign::Neg => r.neg().coeffs,
                Sign::Zero => r.coeffs.clone(),
            };
            let rel = if *sg == Sign::Zero { Rel::Eq } else { Rel::Gt };
            s.push(Row::new(pad(&co, false), q(0), rel));
        }
        let a = &win.roots()[root].coeffs;
        let mut both = pad(a, true);
        for i in 0..n {
            both[n + i] = a[i].clone();
        }
        s.push(Row::new(both.iter().map(|x| -x.clone()).collect(), q(k), Rel::Gt));
        if !s.is_feasible() {
            best = Some(k);
        }
    }
    best
}

#[test]
fn chimney_matches_half_space_oracle() {
    for label in ["A1", "A2", "B2"] {
        let win = window(label, 3);
        let dirs = weyl_facet_signs(&win);
        for c in win.closure_faces(0) {
            for dir in &dirs {
                let ch = chimney(&win, &c, dir).unwrap();
                for root in 0..win.roots().len() {
                    let lo = oracle_lower(&win, &c, dir, root, 4);
                    assert_eq!(ch.bounds[root].0, lo, "{label} lower bound of root {root}");
                }
                assert_eq!(&ch.recovered_direction(&win), dir, "direction is recovered");
                let (x, v) = ch.characteristic_ray(&win).unwrap();
                assert_eq!(ray_enclos_bounds(&win, &x, &v), ch.bounds, "the enclos of a characteristic ray is the chimney");
                for t in 0..5 {
                    assert!(ch.contains_point(&win, &add(&x, &scale(&v, &q(t)))));
                }
            }
        }
    }
}

#[test]
fn chimney_examples_and_point_membership() {
    let win = window("A1", 3);
    let vertex = Facet { code: vec![0] };
    let ch = chimney(&win, &vertex, &[Sign::Pos]).unwrap();
    assert_eq!(ch.bounds, vec![(Some(0), None)]);
    assert!(ch.contains_point(&win, &[q(7)]));
    assert!(!ch.contains_point(&win, &[qf(-1, 4)]));
    let a2 = window("A2", 3);
    let base = a2.alcove_facet(0);
    let closed = chimney(&a2, &base, &[Sign::Zero, Sign::Zero, Sign::Zero]).unwrap();
    for i in 0..a2.len() {
        for f in a2.closure_faces(i) {
            let in_closure = a2.facet_in_closure(&f, 0);
            assert_eq!(closed.contains_facet(&f), in_closure);
        }
    }
    // vertex plus the fundamental chamber: 100 sample points against the half-space oracle
    let v = Facet { code: vec![0, 0, 0] };
    let dir = a2.rs.weyl_facet_of(&a2.rs.rho_point).unwrap();
    let ch = chimney(&a2, &v, &dir).unwrap();
    let bounds: Vec<Option<i64>> = (0..3).map(|k| oracle_lower(&a2, &v, &dir, k, 3)).collect();
    let mut g = common::rng(7);
    for _ in 0..100 {
        let p = common::rand_vec(&mut g, 2, 3, 4);
        let inside = a2.roots().iter().zip(&bounds).all(|(r, lo)| lo.map_or(true, |lo| r.eval(&p) >= q(lo)));
        assert_eq!(ch.contains_point(&a2, &p), inside);
    }
}

#[test]
fn gallery_along_ray_examples() {
    // a ray inside the chamber cone of the fundamental alcove from its special vertex
    let a2 = window("A2", 6);
    let rho = a2.rs.rho_point.0.clone();
    let g = gallery_along_ray(&a2, 0, &[q(0), q(0)], &rho, 4).unwrap();
    assert!(a2.is_tense(&g.chambers));
    assert_eq!(g.len(), a2.distance(g.chambers[0], *g.chambers.last().unwrap()));
    // affine A1 along the line: the straight gallery
    let a1 = window("A1", 6);
    let g = gallery_along_ray(&a1, 0, &a1.base_point.clone(), &[q(1)], 4).unwrap();
    assert_eq!(g.len(), 3, "the first piece lies in the starting alcove");
    assert!(g.types.windows(2).all(|p| p[0] != p[1]));
    // along the wall a_1 = 0: stays on the side of the starting alcove
    let coweight = {
        // direction killed by a_1 and positive on a_2
        let a = &a2.rs.simple_roots;
        let m = chambrier::exact_geometry::Mat::from_rows(&[a[0].coeffs.clone(), a[1].coeffs.clone()], 2);
        m.solve(&[q(0), q(1)]).unwrap()
    };
    let g = gallery_along_ray(&a2, 0, &[q(0), q(0)], &coweight, 3).unwrap();
    assert!(g.len() >= 3);
    assert!(a2.is_tense(&g.chambers));
    for &c in &g.chambers {
        assert_eq!(a2.alcoves[c].floors[0], 0, "every alcove lies on the positive side of the wall");
        assert!(closure_meets_ray(&a2, c, &[q(0), q(0)], &coweight));
    }
}

#[test]
fn gallery_along_random_rays_is_tense() {
    let mut g = common::rng(99);
    for label in ["A2", "B2", "G2"] {
        let win = window(label, 7);
        let mut built = 0;
        for _ in 0..30 {
            let c0 = g.gen_range(0..win.len().min(7));
            let faces = win.closure_faces(c0);
            let s = win.facet_point(&faces[g.gen_range(0..faces.len())]).unwrap();
            let mut u = common::rand_vec(&mut g, 2, 3, 1);
            if u.iter().all(|x| *x == q(0)) {
                u[0] = q(1);
            }
            match gallery_along_ray(&win, c0, &s, &u, 3) {
                Ok(gal) => {
                    built += 1;
                    assert!(win.is_tense(&gal.chambers));
                    assert_eq!(gal.chambers[0], c0);
                    for &c in &gal.chambers {
                        assert!(closure_meets_ray(&win, c, &s, &u));
                    }
                }
                Err(ChambrierError::WindowExhausted(_)) => {}
                Err(e) => panic!("{label}: {e}"),
            }
        }
        assert!(built >= 10, "{label}: only {built} rays fit");
    }
}

#[test]
fn tree_structure_and_distances() {
    for (qq, r) in [(1, 4), (2, 3), (3, 2)] {
        let t = TreeBuilding::new(qq, r).unwrap();
        t.check().unwrap();
        let graph = TreeGraph::new(qq, r);
        let vs = t.vertices();
        assert_eq!(vs.len(), graph.adj.len());
        for a in &vs {
            let d = graph.bfs(a);
            for b in &vs {
                assert_eq!(vertex_distance(a, b), d[b]);
                let path = geodesic(a, b);
                assert_eq!(path.len(), d[b] + 1);
                assert_eq!(path, graph.path(a, b));
            }
        }
        let chambers = t.chambers();
        assert_eq!(chambers.len(), vs.len() - 1);
        // chamber distance by breadth-first search on the chamber graph
        for c in &chambers {
            let mut dist = std::collections::HashMap::from([(c.clone(), 0usize)]);
            let mut queue = std::collections::VecDeque::from([c.clone()]);
            while let Some(x) = queue.pop_front() {
                let (a, b) = x.endpoints();
                for v in [a, b] {
                    for y in t.chambers_at(&v) {
                        if !dist.contains_key(&y) {
                            dist.insert(y.clone(), dist[&x] + 1);
                            queue.push_back(y);
                        }
                    }
                }
            }
            for d in &chambers {
                assert_eq!(chamber_distance(c, d), dist[d]);
            }
        }
    }
}

#[test]
fn retraction_examples_and_oracle() {
    let t = TreeBuilding::new(2, 4).unwrap();
    let graph = TreeGraph::new(2, 4);
    let leaves = t.boundary();
    let a = t.apartment(&leaves[0], leaves.last().unwrap()).unwrap();
    let chambers = t.chambers();
    for c in a.chambers() {
        let i = a.chamber_position(&c).unwrap() as i64;
        for x in a.chambers() {
            assert_eq!(t.retract(&a, &c, &x).unwrap(), a.chamber_position(&x).unwrap() as i64, "A is fixed");
        }
        for x in &chambers {
            let p = t.retract(&a, &c, x).unwrap();
            assert_eq!(p, retract_by_isomorphism(&graph, &a, &c, x));
            assert_eq!((p - i).unsigned_abs() as usize, chamber_distance(&c, x), "distance to c is kept");
            if chamber_distance(&c, x) == 1 && a.chamber_position(x).is_none() {
                let (c1, c2) = c.endpoints();
                let shared = if x.endpoints().0 == c1 || x.endpoints().1 == c1 { c1 } else { c2 };
                let through = a.vertex_position(&shared).unwrap() as i64;
                let expected = if through == i { i - 1 } else { i + 1 };
                assert_eq!(p, expected, "folded across the shared panel");
            }
        }
        // distance nonincreasing along adjacent chambers
        for x in &chambers {
            let (u, v) = x.endpoints();
            for w in [u, v] {
                for y in t.chambers_at(&w) {
                    let d = (t.retract(&a, &c, x).unwrap() - t.retract(&a, &c, &y).unwrap()).unsigned_abs() as usize;
                    assert!(d <= chamber_distance(x, &y));
                }
            }
        }
    }
}

/// Position of a chamber relative to the wall between `p1` and `p2`: true on the side of `p1`.
fn on_side_of(p: i64, p1: i64, p2: i64) -> bool {
    if p1 < p2 {
        p <= p1
    } else {
        p >= p1
    }
}

fn check_trichotomy(qq: usize, r: usize) -> usize {
    let t = TreeBuilding::new(qq, r).unwrap();
    let chambers = t.chambers();
    let mut count = 0;
    for (c1, c2) in adjacent_pairs(&t) {
        let a = apartment_for_pair(&t, &c1, &c2);
        let p1 = a.chamber_position(&c1).unwrap() as i64;
        let p2 = a.chamber_position(&c2).unwrap() as i64;
        let sigma = |p: i64| p1 + p2 - p;
        for d in &chambers {
            let r1 = t.retract(&a, &c1, d).unwrap();
            let r2 = t.retract(&a, &c2, d).unwrap();
            assert!(r2 == r1 || r2 == sigma(r1));
            if on_side_of(r1, p1, p2) {
                assert_eq!(r2, r1);
            } else {
                let between = chamber_distance(&c1, &c2) + chamber_distance(&c2, d) == chamber_distance(&c1, d);
                assert_eq!(r2 == r1, between);
            }
            count += 1;
        }
    }
    count
}

#[test]
fn retraction_trichotomy_exhaustive() {
    assert!(check_trichotomy(2, 4) > 0);
    assert!(check_trichotomy(3, 3) > 0);
}

#[test]
fn retraction_literal_condition_fails_at_the_adjacent_chamber() {
    // with d = c2 the retractions agree but c1 is not between d and c2
    let t = TreeBuilding::new(2, 3).unwrap();
    let c1 = Chamber::Base;
    let c2 = Chamber::Edge(Vertex { side: 1, digits: vec![0] });
    let a = t.apartment_containing(&c1, &c2).unwrap();
    assert_eq!(t.retract(&a, &c1, &c2).unwrap(), t.retract(&a, &c2, &c2).unwrap());
    let literal = chamber_distance(&c2, &c1) + chamber_distance(&c1, &c2) == chamber_distance(&c2, &c2);
    assert!(!literal);
}

#[test]
fn retraction_agreement_iff_common_apartment() {
    let (qq, r) = (2, 3);
    let t = TreeBuilding::new(qq, r).unwrap();
    let graph = TreeGraph::new(qq, r);
    let apartments: Vec<BTreeSet<(Vertex, Vertex)>> = graph.apartments().iter().map(|p| edge_set(p)).collect();
    for (c1, c2) in adjacent_pairs(&t) {
        let a = apartment_for_pair(&t, &c1, &c2);
        for d in t.chambers() {
            let same = t.retract(&a, &c1, &d).unwrap() == t.retract(&a, &c2, &d).unwrap();
            let keys = [chamber_key(&c1), chamber_key(&c2), chamber_key(&d)];
            let common = apartments.iter().any(|e| keys.iter().all(|k| e.contains(k)));
            assert_eq!(same, common);
        }
    }
}

#[test]
fn apartment_intersections_are_paths() {
    let graph = TreeGraph::new(2, 3);
    let apts = graph.apartments();
    for a in &apts {
        for b in &apts {
            let common: Vec<usize> = a.iter().enumerate().filter(|(_, v)| b.contains(v)).map(|(i, _)| i).collect();
            if let (Some(first), Some(last)) = (common.first(), common.last()) {
                assert_eq!(last - first + 1, common.len(), "intersection is contiguous in a");
                let sub: Vec<&Vertex> = a[*first..=*last].iter().collect();
                let pos: Vec<usize> = sub.iter().map(|v| b.iter().position(|w| w == *v).unwrap()).collect();
                assert!(pos.windows(2).all(|p| p[0].abs_diff(p[1]) == 1), "and a path in b");
            }
        }
    }
}

fn check_two_rays(t: &TreeBuilding, r1: &TreeRay, r2: &TreeRay) -> (TreeRay, TreeRay, TreeApartment) {
    let (s1, s2, apt) = t.rays_common_apartment(r1, r2).unwrap();
    assert!(t.is_subray(&s1, r1) && t.is_subray(&s2, r2));
    for s in [&s1, &s2] {
        for v in t.ray_vertices(s) {
            assert!(apt.vertex_position(&v).is_some());
        }
    }
    assert!(t.is_boundary(&apt.vertices[0]) && t.is_boundary(apt.vertices.last().unwrap()));
    assert!(apt.vertices.windows(2).all(|p| vertex_distance(&p[0], &p[1]) == 1));
    assert_eq!(vertex_distance(&apt.vertices[0], apt.vertices.last().unwrap()) + 1, apt.len());
    (s1, s2, apt)
}

#[test]
fn two_rays_in_one_apartment_and_radius_stable() {
    let (qq, r) = (2, 4);
    let t = TreeBuilding::new(qq, r).unwrap();
    let t1 = TreeBuilding::new(qq, r + 1).unwrap();
    let ends = t.boundary();
    let origins: Vec<Vertex> = t.vertices().into_iter().filter(|v| v.depth() <= 1).collect();
    for e1 in &ends {
        for e2 in &ends {
            for o1 in &origins {
                for o2 in &origins {
                    let r1 = t.ray(o1, e1).unwrap();
                    let r2 = t.ray(o2, e2).unwrap();
                    let (s1, s2, _) = check_two_rays(&t, &r1, &r2);
                    let (u1, u2, _) = check_two_rays(&t1, &TreeBuilding::refine_ray(&r1), &TreeBuilding::refine_ray(&r2));
                    assert_eq!((s1.origin, s2.origin), (u1.origin, u2.origin), "radius stable");
                }
            }
        }
    }
}

#[test]
fn rays_common_apartment_examples() {
    let t = TreeBuilding::new(2, 4).unwrap();
    let e = t.boundary()[3].clone();
    let r1 = t.ray(&Vertex::root(0), &e).unwrap();
    let r2 = t.ray(&Vertex::root(1), &e).unwrap();
    let (s1, s2, _) = t.rays_common_apartment(&r1, &r2).unwrap();
    assert_eq!(s1, s2, "same end: a common subray");
    let ends = t.boundary();
    let a = t.apartment(&ends[0], ends.last().unwrap()).unwrap();
    let mid = a.vertices[a.len() / 2].clone();
    let r1 = t.ray(&mid, &ends[0]).unwrap();
    let r2 = t.ray(&mid, ends.last().unwrap()).unwrap();
    let (s1, s2, apt) = t.rays_common_apartment(&r1, &r2).unwrap();
    assert_eq!(apt, a, "rays in one apartment give that apartment");
    assert_eq!((s1, s2), (r1, r2));
}

#[test]
fn parallelism_is_same_end_and_an_equivalence() {
    let t = TreeBuilding::new(2, 3).unwrap();
    let ends = t.boundary();
    let origins = [Vertex::root(0), Vertex::root(1), Vertex { side: 0, digits: vec![1] }];
    let rays: Vec<TreeRay> = ends.iter().flat_map(|e| origins.iter().map(move |o| TreeRay { origin: o.clone(), end: e.clone() })).collect();
    for r in &rays {
        for v in t.ray_vertices(r).iter().take(t.ray_vertices(r).len() - 1) {
            let sub = t.ray(v, &r.end).unwrap();
            assert!(t.parallel(r, &sub).unwrap(), "a ray is parallel to its subrays");
        }
    }
    let par: Vec<Vec<bool>> = rays.iter().map(|a| rays.iter().map(|b| t.parallel(a, b).unwrap()).collect()).collect();
    for i in 0..rays.len() {
        for j in 0..rays.len() {
            assert_eq!(par[i][j], rays[i].end == rays[j].end);
            for k in 0..rays.len() {
                if par[i][j] && par[j][k] {
                    assert!(par[i][k]);
                }
            }
        }
    }
}

#[test]
fn tree_exports() {
    let t = TreeBuilding::new(2, 2).unwrap();
    let j = t.to_json();
    assert_eq!(j["schema"], "chambrier/1");
    assert_eq!(j["vertices"].as_array().unwrap().len(), 14);
    let boundary = j["vertices"].as_array().unwrap().iter().filter(|v| v["boundary"] == true).count();
    assert_eq!(boundary, 8);
    let dot = t.to_dot();
    assert_eq!(dot.matches(" -- ").count(), 13);
    assert_eq!(t.to_dot(), dot);
    assert_eq!(Vertex::parse("b01").unwrap(), Vertex { side: 1, digits: vec![0, 1] });
    assert!(TreeBuilding::new(0, 2).is_err());
    assert!(matches!(t.ray(&Vertex { side: 0, digits: vec![0, 1] }, &Vertex { side: 0, digits: vec![0, 1] }), Err(ChambrierError::WindowExhausted(_))));
}

fn vertex_strategy(qq: u8, r: usize) -> impl proptest::strategy::Strategy<Value = Vertex> {
    use proptest::prelude::*;
    (0u8..2, proptest::collection::vec(0..qq, 0..=r)).prop_map(|(side, digits)| Vertex { side, digits })
}

proptest::proptest! {
    #[test]
    fn median_lies_on_the_three_geodesics(a in vertex_strategy(3, 5), b in vertex_strategy(3, 5), c in vertex_strategy(3, 5)) {
        let m = median(&a, &b, &c);
        for (x, y) in [(&a, &b), (&a, &c), (&b, &c)] {
            proptest::prop_assert!(geodesic(x, y).contains(&m));
        }
    }

    #[test]
    fn retraction_keeps_distance_to_the_center(x in vertex_strategy(3, 5), y in vertex_strategy(3, 5)) {
        let t = TreeBuilding::new(3, 5).unwrap();
        let ends = t.boundary();
        let a = t.apartment(&ends[0], ends.last().unwrap()).unwrap();
        let c = a.chambers()[a.len() / 2].clone();
        let cx = if x.digits.is_empty() { Chamber::Base } else { Chamber::Edge(x) };
        let cy = if y.digits.is_empty() { Chamber::Base } else { Chamber::Edge(y) };
        let px = t.retract(&a, &c, &cx).unwrap();
        let py = t.retract(&a, &c, &cy).unwrap();
        let i = a.chamber_position(&c).unwrap() as i64;
        proptest::prop_assert_eq!((px - i).unsigned_abs() as usize, chamber_distance(&c, &cx));
        proptest::prop_assert!(((px - py).unsigned_abs() as usize) <= chamber_distance(&cx, &cy));
    }
}

//! Finite windows of alcoves in an affine apartment, with minimal galleries, enclos and
//! projections between facets.

use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{ChambrierError, Result};
use crate::exact_geometry::linalg::{add, scale, sub, LinForm, Mat, Q};
use crate::exact_geometry::{q, RootSystem};
use crate::polyhedra::{Rel, Row, System};

/// Affine map `x -> m x + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub m: Mat,
    pub b: Vec<Q>,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        AffineMap { m: Mat::identity(n), b: vec![q(0); n] }
    }
    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        add(&self.m.apply(x), &self.b)
    }
    /// `self o other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap { m: self.m.mul(&other.m), b: self.apply(&other.b) }
    }
}

/// Facet of the affine apartment, encoded per positive root `a`: `2m` when the facet lies
/// in the wall `a = m`, `2k + 1` when it lies in the open strip `k < a < k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Facet {
    pub code: Vec<i64>,
}

impl Facet {
    pub fn is_alcove(&self) -> bool {
        self.code.iter().all(|c| c.rem_euclid(2) == 1)
    }
}

/// Alcove of a window: its affine Weyl element, floors over the positive roots and
/// neighbors by generator type (`None` when outside the window).
#[derive(Clone, Debug)]
pub struct Alcove {
    pub floors: Vec<i64>,
    pub map: AffineMap,
    pub neighbors: Vec<Option<usize>>,
    pub depth: usize,
}

/// Chambers of a gallery and the types of the panels it crosses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GalleryWord {
    pub chambers: Vec<usize>,
    pub types: Vec<usize>,
}

impl GalleryWord {
    pub fn len(&self) -> usize {
        self.types.len()
    }
    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }
}

/// Alcoves within gallery distance `radius` of the fundamental alcove.
#[derive(Clone, Debug)]
pub struct AlcoveWindow {
    pub rs: RootSystem,
    pub radius: usize,
    /// Generators `s_1, ..., s_n`, then one affine reflection `s_0` per component.
    pub generators: Vec<AffineMap>,
    /// Interior point of the fundamental alcove.
    pub base_point: Vec<Q>,
    pub alcoves: Vec<Alcove>,
    index: HashMap<Vec<i64>, usize>,
}

pub(crate) fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("window coordinates fit in i64")
}

fn window_exhausted(what: impl Into<String>) -> ChambrierError {
    ChambrierError::WindowExhausted(what.into())
}

impl AlcoveWindow {
    pub fn new(rs: &RootSystem, radius: usize) -> Result<AlcoveWindow> {
        let n = rs.rank;
        let mut generators: Vec<AffineMap> =
            rs.simple_reflections.iter().map(|s| AffineMap { m: s.clone(), b: vec![q(0); n] }).collect();
        let a = Mat::from_rows(&rs.simple_roots.iter().map(|r| r.coeffs.clone()).collect::<Vec<_>>(), n);
        let mut targets = vec![q(0); n];
        for (c, members) in rs.components.iter().enumerate() {
            let theta = rs.highest_root(c);
            let s = rs.reflection_of(&theta);
            let x = &rs.rho_point.0;
            let coroot = scale(&sub(x, &s.apply(x)), &(q(1) / theta.eval(x)));
            generators.push(AffineMap { m: s, b: coroot });
            let h = rs.height(&theta) + q(1);
            for &i in members {
                targets[i] = q(1) / &h;
            }
        }
        let base_point = a.solve(&targets).expect("simple roots form a basis");
        let mut w = AlcoveWindow { rs: rs.clone(), radius, generators, base_point, alcoves: Vec::new(), index: HashMap::new() };
        let id = AffineMap::identity(n);
        let f0 = w.floors_of_map(&id);
        w.index.insert(f0.clone(), 0);
        w.alcoves.push(Alcove { floors: f0, map: id, neighbors: Vec::new(), depth: 0 });
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let depth = w.alcoves[i].depth;
            let mut nbrs = Vec::with_capacity(w.generators.len());
            for t in 0..w.generators.len() {
                let map = w.alcoves[i].map.compose(&w.generators[t]);
                let fl = w.floors_of_map(&map);
                let j = match w.index.get(&fl) {
                    Some(&j) => Some(j),
                    None if depth < radius => {
                        let j = w.alcoves.len();
                        w.index.insert(fl.clone(), j);
                        w.alcoves.push(Alcove { floors: fl, map, neighbors: Vec::new(), depth: depth + 1 });
                        queue.push_back(j);
                        Some(j)
                    }
                    None => None,
                };
                nbrs.push(j);
            }
            w.alcoves[i].neighbors = nbrs;
        }
        Ok(w)
    }

    pub fn dim(&self) -> usize {
        self.rs.rank
    }

    pub fn roots(&self) -> &[LinForm] {
        &self.rs.positive_roots
    }

    pub fn len(&self) -> usize {
        self.alcoves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alcoves.is_empty()
    }

    pub fn num_types(&self) -> usize {
        self.generators.len()
    }

    fn floors_of_map(&self, map: &AffineMap) -> Vec<i64> {
        self.floors_at(&map.apply(&self.base_point))
    }

    /// Floors of the positive roots at a point.
    pub fn floors_at(&self, x: &[Q]) -> Vec<i64> {
        self.roots().iter().map(|r| floor_i64(&r.eval(x))).collect()
    }

    pub fn index_of_floors(&self, floors: &[i64]) -> Option<usize> {
        self.index.get(floors).copied()
    }

    /// Interior point of an alcove.
    pub fn interior_point(&self, i: usize) -> Vec<Q> {
        self.alcoves[i].map.apply(&self.base_point)
    }

    /// Floors of the alcove adjacent to `i` through its panel of type `t`, in or out of the window.
    pub fn neighbor_floors(&self, i: usize, t: usize) -> Vec<i64> {
        self.floors_of_map(&self.alcoves[i].map.compose(&self.generators[t]))
    }

    /// Number of walls separating two alcoves.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        floor_distance(&self.alcoves[a].floors, &self.alcoves[b].floors)
    }

    /// Wall `(root index, level)` crossed between two adjacent alcoves.
    pub fn crossed_wall(&self, a: usize, b: usize) -> Option<(usize, i64)> {
        let fa = &self.alcoves[a].floors;
        let fb = &self.alcoves[b].floors;
        let diff: Vec<usize> = (0..fa.len()).filter(|&i| fa[i] != fb[i]).collect();
        match diff.as_slice() {
            [i] if (fa[*i] - fb[*i]).abs() == 1 => Some((*i, fa[*i].max(fb[*i]))),
            _ => None,
        }
    }

    /// Whether a gallery crosses no wall twice.
    pub fn is_tense(&self, chambers: &[usize]) -> bool {
        let mut seen = BTreeSet::new();
        chambers.windows(2).all(|p| match self.crossed_wall(p[0], p[1]) {
            Some(w) => seen.insert(w),
            None => false,
        })
    }

    /// Breadth-first distances from `d` through in-window panels.
    pub fn window_distances(&self, d: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[d] = Some(0);
        let mut queue = VecDeque::from([d]);
        while let Some(i) = queue.pop_front() {
            let di = dist[i].unwrap();
            for j in self.alcoves[i].neighbors.iter().flatten() {
                if dist[*j].is_none() {
                    dist[*j] = Some(di + 1);
                    queue.push_back(*j);
                }
            }
        }
        dist
    }

    /// Minimal gallery from `c` to `d` choosing the smallest panel type at each step among
    /// those keeping a minimal continuation inside the window.
    pub fn minimal_gallery(&self, c: usize, d: usize) -> Result<GalleryWord> {
        let bfs = self.window_distances(d);
        let good = |x: usize| bfs[x] == Some(self.distance(x, d));
        if !good(c) {
            return Err(window_exhausted(format!("no minimal gallery from alcove {c} to {d} inside the window")));
        }
        let mut chambers = vec![c];
        let mut types = Vec::new();
        let mut cur = c;
        while cur != d {
            let here = self.distance(cur, d);
            let (t, next) = self.alcoves[cur]
                .neighbors
                .iter()
                .enumerate()
                .find_map(|(t, n)| n.filter(|&j| good(j) && self.distance(j, d) + 1 == here).map(|j| (t, j)))
                .ok_or_else(|| ChambrierError::Invariant("minimal gallery has no continuation".into()))?;
            chambers.push(next);
            types.push(t);
            cur = next;
        }
        let mut map = self.alcoves[c].map.clone();
        for &t in &types {
            map = map.compose(&self.generators[t]);
        }
        if map != self.alcoves[d].map || types.len() != self.distance(c, d) {
            return Err(ChambrierError::Invariant("gallery word does not reach its target".into()));
        }
        Ok(GalleryWord { chambers, types })
    }

    /// Every minimal gallery from `c` to `d`; fails if one of them leaves the window.
    pub fn all_minimal_galleries(&self, c: usize, d: usize) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut path = vec![c];
        self.extend_galleries(d, &mut path, &mut out)?;
        Ok(out)
    }

    fn extend_galleries(&self, d: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<()> {
        let cur = *path.last().unwrap();
        if cur == d {
            out.push(path.clone());
            return Ok(());
        }
        let here = self.distance(cur, d);
        let target = &self.alcoves[d].floors;
        for t in 0..self.num_types() {
            match self.alcoves[cur].neighbors[t] {
                Some(j) if self.distance(j, d) + 1 == here => {
                    path.push(j);
                    self.extend_galleries(d, path, out)?;
                    path.pop();
                }
                None if floor_distance(&self.neighbor_floors(cur, t), target) + 1 == here => {
                    return Err(window_exhausted(format!("a minimal gallery towards alcove {d} leaves the window")));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Alcoves on some minimal gallery between `a` and `b`.
    pub fn interval(&self, a: usize, b: usize) -> Result<BTreeSet<usize>> {
        let mut seen = BTreeSet::from([a]);
        let mut queue = VecDeque::from([a]);
        let target = &self.alcoves[b].floors;
        while let Some(i) = queue.pop_front() {
            let here = self.distance(i, b);
            for t in 0..self.num_types() {
                match self.alcoves[i].neighbors[t] {
                    Some(j) if self.distance(j, b) + 1 == here => {
                        if seen.insert(j) {
                            queue.push_back(j);
                        }
                    }
                    None if floor_distance(&self.neighbor_floors(i, t), target) + 1 == here => {
                        return Err(window_exhausted(format!("the interval between alcoves {a} and {b} leaves the window")));
                    }
                    _ => {}
                }
            }
        }
        Ok(seen)
    }

    fn check_nonempty(&self, set: &[usize]) -> Result<()> {
        if set.is_empty() {
            return Err(ChambrierError::Validation("empty chamber set".into()));
        }
        if let Some(&i) = set.iter().find(|&&i| i >= self.len()) {
            return Err(ChambrierError::Validation(format!("alcove {i} is not in the window")));
        }
        Ok(())
    }

    /// Enclos of a chamber set as the chambers inside every half-apartment containing it.
    pub fn enclos_half_spaces(&self, set: &[usize]) -> Result<Vec<usize>> {
        self.check_nonempty(set)?;
        let r = self.roots().len();
        let lo: Vec<i64> = (0..r).map(|k| set.iter().map(|&i| self.alcoves[i].floors[k]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..r).map(|k| set.iter().map(|&i| self.alcoves[i].floors[k]).max().unwrap()).collect();
        let inside = |f: &[i64]| (0..r).all(|k| lo[k] <= f[k] && f[k] <= hi[k]);
        let mut seen: BTreeSet<usize> = set.iter().copied().collect();
        let mut queue: VecDeque<usize> = seen.iter().copied().collect();
        while let Some(i) = queue.pop_front() {
            for t in 0..self.num_types() {
                match self.alcoves[i].neighbors[t] {
                    Some(j) if inside(&self.alcoves[j].floors) => {
                        if seen.insert(j) {
                            queue.push_back(j);
                        }
                    }
                    None if inside(&self.neighbor_floors(i, t)) => {
                        return Err(window_exhausted("the enclos leaves the window"));
                    }
                    _ => {}
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Smallest chamber set containing `set` and every minimal gallery between two of its members.
    pub fn enclos_gallery_hull(&self, set: &[usize]) -> Result<Vec<usize>> {
        self.check_nonempty(set)?;
        let mut hull: Vec<usize> = Vec::new();
        let mut members: BTreeSet<usize> = BTreeSet::new();
        let mut pending: VecDeque<usize> = set.iter().copied().collect();
        while let Some(x) = pending.pop_front() {
            if !members.insert(x) {
                continue;
            }
            for &y in &hull {
                for z in self.interval(x, y)? {
                    if !members.contains(&z) {
                        pending.push_back(z);
                    }
                }
            }
            hull.push(x);
        }
        Ok(members.into_iter().collect())
    }

    /// Enclos of a chamber set, computed by half-spaces and checked against the gallery hull.
    pub fn enclos(&self, set: &[usize]) -> Result<Vec<usize>> {
        let a = self.enclos_half_spaces(set)?;
        let b = self.enclos_gallery_hull(set)?;
        if a != b {
            return Err(ChambrierError::Invariant(format!("enclos routes disagree: {a:?} vs {b:?}")));
        }
        Ok(a)
    }

    /// Facet containing a point.
    pub fn facet_of_point(&self, x: &[Q]) -> Result<Facet> {
        if x.len() != self.dim() {
            return Err(ChambrierError::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        let code = self
            .roots()
            .iter()
            .map(|r| {
                let v = r.eval(x);
                let k = floor_i64(&v);
                if v == q(k) {
                    2 * k
                } else {
                    2 * k + 1
                }
            })
            .collect();
        Ok(Facet { code })
    }

    /// Constraint system of a facet.
    pub fn facet_system(&self, f: &Facet) -> System {
        let mut s = System::new(self.dim());
        for (r, &c) in self.roots().iter().zip(&f.code) {
            let k = c.div_euclid(2);
            if c.rem_euclid(2) == 0 {
                s.push(Row::new(r.coeffs.clone(), q(-k), Rel::Eq));
            } else {
                s.push(Row::new(r.coeffs.clone(), q(-k), Rel::Gt));
                s.push(Row::new(r.neg().coeffs, q(k + 1), Rel::Gt));
            }
        }
        s
    }

    /// A point of a facet.
    pub fn facet_point(&self, f: &Facet) -> Result<Vec<Q>> {
        self.facet_system(f).solve().ok_or(ChambrierError::EmptyCone)
    }

    /// Dimension of the affine span of a facet.
    pub fn facet_dim(&self, f: &Facet) -> usize {
        let rows: Vec<Vec<Q>> = self
            .roots()
            .iter()
            .zip(&f.code)
            .filter(|(_, c)| c.rem_euclid(2) == 0)
            .map(|(r, _)| r.coeffs.clone())
            .collect();
        self.dim() - Mat::from_rows(&rows, self.dim()).rank()
    }

    /// The alcove itself as a facet.
    pub fn alcove_facet(&self, i: usize) -> Facet {
        Facet { code: self.alcoves[i].floors.iter().map(|k| 2 * k + 1).collect() }
    }

    /// Whether `f` lies in the closure of the alcove with the given floors.
    pub fn facet_in_closure_of_floors(f: &Facet, floors: &[i64]) -> bool {
        f.code.iter().zip(floors).all(|(&c, &k)| if c.rem_euclid(2) == 0 { c == 2 * k || c == 2 * k + 2 } else { c == 2 * k + 1 })
    }

    pub fn facet_in_closure(&self, f: &Facet, i: usize) -> bool {
        Self::facet_in_closure_of_floors(f, &self.alcoves[i].floors)
    }

    /// Vertices of the fundamental alcove: sums over components of `0` or `w_i / m_i`.
    fn fundamental_vertices(&self) -> Vec<Vec<Vec<Q>>> {
        let n = self.dim();
        let simple = Mat::from_rows(&self.rs.simple_roots.iter().map(|r| r.coeffs.clone()).collect::<Vec<_>>(), n);
        self.rs
            .components
            .iter()
            .enumerate()
            .map(|(c, members)| {
                let marks = self.rs.simple_root_coords(&self.rs.highest_root(c));
                let mut vs = vec![vec![q(0); n]];
                for &i in members {
                    let mut e = vec![q(0); n];
                    e[i] = q(1) / &marks[i];
                    vs.push(simple.solve(&e).expect("simple roots form a basis"));
                }
                vs
            })
            .collect()
    }

    /// Faces of the closure of an alcove, as facets.
    pub fn closure_faces(&self, i: usize) -> Vec<Facet> {
        let per_comp = self.fundamental_vertices();
        let mut points: Vec<Vec<Q>> = vec![vec![q(0); self.dim()]];
        for vs in &per_comp {
            let mut next = Vec::new();
            for mask in 1u32..(1 << vs.len()) {
                let chosen: Vec<&Vec<Q>> = vs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, v)| v).collect();
                let mut bary = vec![q(0); self.dim()];
                for v in &chosen {
                    bary = add(&bary, v);
                }
                let bary = scale(&bary, &(q(1) / q(chosen.len() as i64)));
                for p in &points {
                    next.push(add(p, &bary));
                }
            }
            points = next;
        }
        let map = &self.alcoves[i].map;
        let mut out: Vec<Facet> = points.iter().map(|p| self.facet_of_point(&map.apply(p)).unwrap()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Alcoves whose closure contains `f`; fails if one of them is outside the window.
    pub fn star(&self, f: &Facet) -> Result<Vec<usize>> {
        if f.code.len() != self.roots().len() {
            return Err(ChambrierError::DimensionMismatch { expected: self.roots().len(), got: f.code.len() });
        }
        let start: Vec<i64> = f.code.iter().map(|c| c.div_euclid(2)).collect();
        let s = self.index_of_floors(&start).ok_or_else(|| window_exhausted("the star of a facet leaves the window"))?;
        let mut seen = BTreeSet::from([s]);
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            for t in 0..self.num_types() {
                match self.alcoves[i].neighbors[t] {
                    Some(j) if self.facet_in_closure(f, j) => {
                        if seen.insert(j) {
                            queue.push_back(j);
                        }
                    }
                    None if Self::facet_in_closure_of_floors(f, &self.neighbor_floors(i, t)) => {
                        return Err(window_exhausted("the star of a facet leaves the window"));
                    }
                    _ => {}
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Facet whose closure is the closed polyhedron `sys`, known to lie in the closure of
    /// the alcove with floors `floors`.
    fn face_code(&self, sys: &System, floors: &[i64]) -> Result<Facet> {
        if !sys.is_feasible() {
            return Err(ChambrierError::Invariant("projection face is empty".into()));
        }
        let mut code = Vec::new();
        for (r, &k) in self.roots().iter().zip(floors) {
            let mut above = sys.clone();
            above.push(Row::new(r.coeffs.clone(), q(-k), Rel::Gt));
            let mut below = sys.clone();
            below.push(Row::new(r.neg().coeffs, q(k + 1), Rel::Gt));
            code.push(if !above.is_feasible() {
                2 * k
            } else if !below.is_feasible() {
                2 * k + 2
            } else {
                2 * k + 1
            });
        }
        Ok(Facet { code })
    }

    fn closed_box(&self, lo: &[i64], hi: &[i64]) -> System {
        let mut s = System::new(self.dim());
        for ((r, &l), &h) in self.roots().iter().zip(lo).zip(hi) {
            s.push(Row::new(r.coeffs.clone(), q(-l), Rel::Ge));
            s.push(Row::new(r.neg().coeffs, q(h), Rel::Ge));
        }
        s
    }

    /// Minimal distance between the stars of `d` and `c`, with the pairs realizing it.
    fn closest_pairs(&self, c: &Facet, d: &Facet) -> Result<(usize, Vec<(usize, usize)>)> {
        let sc = self.star(c)?;
        let sd = self.star(d)?;
        let mut best = usize::MAX;
        let mut pairs = Vec::new();
        for &h in &sd {
            for &g in &sc {
                let dist = self.distance(h, g);
                if dist < best {
                    best = dist;
                    pairs.clear();
                }
                if dist == best {
                    pairs.push((h, g));
                }
            }
        }
        Ok((best, pairs))
    }

    /// Projection of `d` on `c` as the face of a terminal chamber cut by the walls containing both.
    pub fn proj_by_walls(&self, c: &Facet, d: &Facet) -> Result<Facet> {
        let (_, pairs) = self.closest_pairs(c, d)?;
        let (_, g) = pairs[0];
        let fl = &self.alcoves[g].floors;
        let mut sys = self.closed_box(fl, &fl.iter().map(|k| k + 1).collect::<Vec<_>>());
        for (r, (&cc, &dc)) in self.roots().iter().zip(c.code.iter().zip(&d.code)) {
            if cc.rem_euclid(2) == 0 && cc == dc {
                sys.push(Row::new(r.coeffs.clone(), q(-cc / 2), Rel::Eq));
            }
        }
        self.face_code(&sys, fl)
    }

    /// Projection of `d` on `c` as the intersection of the final chambers of every minimal
    /// gallery from `d` to `c`.
    pub fn proj_by_galleries(&self, c: &Facet, d: &Facet) -> Result<Facet> {
        let (_, pairs) = self.closest_pairs(c, d)?;
        let mut finals = BTreeSet::new();
        for &(h, g) in &pairs {
            for gal in self.all_minimal_galleries(h, g)? {
                finals.insert(*gal.last().unwrap());
            }
        }
        let r = self.roots().len();
        let lo: Vec<i64> = (0..r).map(|k| finals.iter().map(|&g| self.alcoves[g].floors[k]).max().unwrap()).collect();
        let hi: Vec<i64> = (0..r).map(|k| finals.iter().map(|&g| self.alcoves[g].floors[k] + 1).min().unwrap()).collect();
        let sys = self.closed_box(&lo, &hi);
        self.face_code(&sys, &lo)
    }

    /// Projection of `d` on `c`, computed both ways and checked against each other.
    pub fn proj(&self, c: &Facet, d: &Facet) -> Result<Facet> {
        let a = self.proj_by_walls(c, d)?;
        let b = self.proj_by_galleries(c, d)?;
        if a != b {
            return Err(ChambrierError::Invariant(format!("projection routes disagree: {a:?} vs {b:?}")));
        }
        if self.facet_dim(&a) < self.facet_dim(d) {
            return Err(ChambrierError::Invariant("projection has smaller dimension than its source".into()));
        }
        Ok(a)
    }

    /// Closed half-space bounds `lo <= a <= hi` per root of the smallest box containing the
    /// closure of a facet.
    pub fn facet_bounds(f: &Facet) -> Vec<(i64, i64)> {
        f.code.iter().map(|&c| if c.rem_euclid(2) == 0 { (c / 2, c / 2) } else { (c.div_euclid(2), c.div_euclid(2) + 1) }).collect()
    }
}

fn floor_distance(a: &[i64], b: &[i64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x - y).unsigned_abs() as usize).sum()
}

//! The (q+1)-regular tree truncated at a radius around a base edge: chambers are edges,
//! apartments are geodesic lines, ends are represented by boundary vertices.

use serde::Serialize;
use serde_json::json;
use std::fmt;

use crate::error::{ChambrierError, Result};

/// Vertex on one of the two sides of the base edge, addressed by child indices from that side's root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Vertex {
    pub side: u8,
    pub digits: Vec<u8>,
}

impl Vertex {
    pub fn root(side: u8) -> Vertex {
        Vertex { side, digits: Vec::new() }
    }
    pub fn depth(&self) -> usize {
        self.digits.len()
    }
    /// Type in `{0, 1}`; adjacent vertices have different types.
    pub fn vertex_type(&self) -> u8 {
        ((self.side as usize + self.depth()) % 2) as u8
    }
    pub fn child(&self, i: u8) -> Vertex {
        let mut digits = self.digits.clone();
        digits.push(i);
        Vertex { side: self.side, digits }
    }
    /// Neighbor towards the base edge.
    pub fn up(&self) -> Vertex {
        if self.digits.is_empty() {
            Vertex::root(1 - self.side)
        } else {
            Vertex { side: self.side, digits: self.digits[..self.digits.len() - 1].to_vec() }
        }
    }
    pub fn name(&self) -> String {
        let mut s = String::from(if self.side == 0 { "a" } else { "b" });
        for d in &self.digits {
            s.push(char::from(b'0' + d));
        }
        s
    }
    pub fn parse(s: &str) -> Result<Vertex> {
        let bad = || ChambrierError::Validation(format!("bad vertex name {s}"));
        let mut chars = s.chars();
        let side = match chars.next() {
            Some('a') => 0,
            Some('b') => 1,
            _ => return Err(bad()),
        };
        let digits = chars.map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad)).collect::<Result<Vec<u8>>>()?;
        Ok(Vertex { side, digits })
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Edge of the tree: the base edge, or the edge from a vertex up to its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Chamber {
    Base,
    Edge(Vertex),
}

impl Chamber {
    pub fn endpoints(&self) -> (Vertex, Vertex) {
        match self {
            Chamber::Base => (Vertex::root(0), Vertex::root(1)),
            Chamber::Edge(v) => (v.up(), v.clone()),
        }
    }
    /// Chamber with the given endpoints, if adjacent.
    pub fn between(a: &Vertex, b: &Vertex) -> Option<Chamber> {
        if a.digits.is_empty() && b.digits.is_empty() && a.side != b.side {
            Some(Chamber::Base)
        } else if !b.digits.is_empty() && b.up() == *a {
            Some(Chamber::Edge(b.clone()))
        } else if !a.digits.is_empty() && a.up() == *b {
            Some(Chamber::Edge(a.clone()))
        } else {
            None
        }
    }
    pub fn name(&self) -> String {
        let (a, b) = self.endpoints();
        format!("{}-{}", a.name(), b.name())
    }
}

/// Distance between vertices, edges of length one.
pub fn vertex_distance(a: &Vertex, b: &Vertex) -> usize {
    if a.side == b.side {
        let lcp = a.digits.iter().zip(&b.digits).take_while(|(x, y)| x == y).count();
        a.depth() + b.depth() - 2 * lcp
    } else {
        a.depth() + b.depth() + 1
    }
}

/// Number of panels crossed by a minimal gallery between two chambers.
pub fn chamber_distance(c: &Chamber, d: &Chamber) -> usize {
    let (a1, a2) = c.endpoints();
    let (b1, b2) = d.endpoints();
    [(&a1, &b1), (&a1, &b2), (&a2, &b1), (&a2, &b2)].iter().map(|(x, y)| vertex_distance(x, y)).max().unwrap() - 1
}

/// Vertices of the geodesic from `a` to `b`.
pub fn geodesic(a: &Vertex, b: &Vertex) -> Vec<Vertex> {
    let prefix = |v: &Vertex, k: usize| Vertex { side: v.side, digits: v.digits[..k].to_vec() };
    let meet = if a.side == b.side { a.digits.iter().zip(&b.digits).take_while(|(x, y)| x == y).count() } else { 0 };
    let mut path: Vec<Vertex> = (meet..=a.depth()).rev().map(|k| prefix(a, k)).collect();
    if a.side != b.side {
        path.push(Vertex::root(b.side));
    }
    path.extend((meet + 1..=b.depth()).map(|k| prefix(b, k)));
    path
}

/// Median of three vertices: the unique vertex on all three geodesics between them.
pub fn median(a: &Vertex, b: &Vertex, c: &Vertex) -> Vertex {
    let dab = vertex_distance(a, b);
    let dac = vertex_distance(a, c);
    let dbc = vertex_distance(b, c);
    let k = (dab + dac - dbc) / 2;
    geodesic(a, b)[k].clone()
}

/// The (q+1)-regular tree truncated to the vertices at depth at most `radius` on each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeBuilding {
    pub q: usize,
    pub radius: usize,
}

/// Geodesic path between two distinct boundary vertices: a truncated apartment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeApartment {
    pub vertices: Vec<Vertex>,
}

/// End of an apartment line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LineEnd {
    Minus,
    Plus,
}

impl LineEnd {
    pub fn flip(self) -> LineEnd {
        match self {
            LineEnd::Minus => LineEnd::Plus,
            LineEnd::Plus => LineEnd::Minus,
        }
    }
}

/// Ray from `origin` towards the ends through the boundary vertex `end`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TreeRay {
    pub origin: Vertex,
    pub end: Vertex,
}

impl TreeApartment {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
    pub fn vertex_position(&self, v: &Vertex) -> Option<usize> {
        self.vertices.iter().position(|x| x == v)
    }
    /// Position `i` of a chamber joining vertices `i` and `i + 1`.
    pub fn chamber_position(&self, c: &Chamber) -> Option<usize> {
        let (a, b) = c.endpoints();
        let i = self.vertex_position(&a)?;
        let j = self.vertex_position(&b)?;
        if i.abs_diff(j) == 1 {
            Some(i.min(j))
        } else {
            None
        }
    }
    pub fn chambers(&self) -> Vec<Chamber> {
        self.vertices.windows(2).map(|p| Chamber::between(&p[0], &p[1]).expect("consecutive vertices are adjacent")).collect()
    }
    /// Chamber at an integer position, when it lies in the window.
    pub fn chamber_at(&self, p: i64) -> Option<Chamber> {
        if p < 0 || p as usize + 1 >= self.len() {
            return None;
        }
        let p = p as usize;
        Chamber::between(&self.vertices[p], &self.vertices[p + 1])
    }
}

impl TreeBuilding {
    pub fn new(q: usize, radius: usize) -> Result<TreeBuilding> {
        if !(1..=9).contains(&q) {
            return Err(ChambrierError::Validation(format!("thickness q = {q} must lie in 1..=9")));
        }
        if radius == 0 {
            return Err(ChambrierError::Validation("radius must be positive".into()));
        }
        Ok(TreeBuilding { q, radius })
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        v.side <= 1 && v.depth() <= self.radius && v.digits.iter().all(|&d| (d as usize) < self.q)
    }

    pub fn contains_chamber(&self, c: &Chamber) -> bool {
        match c {
            Chamber::Base => true,
            Chamber::Edge(v) => !v.digits.is_empty() && self.contains(v),
        }
    }

    pub fn is_boundary(&self, v: &Vertex) -> bool {
        v.depth() == self.radius
    }

    fn check_vertex(&self, v: &Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(ChambrierError::WindowExhausted(format!("vertex {v} is outside the ball of radius {}", self.radius)))
        }
    }

    fn check_chamber(&self, c: &Chamber) -> Result<()> {
        if self.contains_chamber(c) {
            Ok(())
        } else {
            Err(ChambrierError::WindowExhausted(format!("chamber {} is outside the window", c.name())))
        }
    }

    /// Neighbors of a vertex inside the window.
    pub fn neighbors(&self, v: &Vertex) -> Vec<Vertex> {
        let mut out = vec![v.up()];
        if v.depth() < self.radius {
            out.extend((0..self.q as u8).map(|i| v.child(i)));
        }
        out
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        for side in 0..2 {
            let mut layer = vec![Vertex::root(side)];
            for _ in 0..=self.radius {
                let next: Vec<Vertex> =
                    if layer[0].depth() < self.radius { layer.iter().flat_map(|v| (0..self.q as u8).map(move |i| v.child(i))).collect() } else { Vec::new() };
                out.append(&mut layer);
                layer = next;
                if layer.is_empty() {
                    break;
                }
            }
        }
        out.sort_by(|a, b| (a.depth(), a.side, &a.digits).cmp(&(b.depth(), b.side, &b.digits)));
        out
    }

    pub fn boundary(&self) -> Vec<Vertex> {
        self.vertices().into_iter().filter(|v| self.is_boundary(v)).collect()
    }

    pub fn chambers(&self) -> Vec<Chamber> {
        let mut out = vec![Chamber::Base];
        out.extend(self.vertices().into_iter().filter(|v| !v.digits.is_empty()).map(Chamber::Edge));
        out
    }

    /// Chambers containing a vertex, inside the window.
    pub fn chambers_at(&self, v: &Vertex) -> Vec<Chamber> {
        self.neighbors(v).iter().map(|w| Chamber::between(v, w).unwrap()).collect()
    }

    /// Regularity and bipartiteness of the window.
    pub fn check(&self) -> Result<()> {
        for v in self.vertices() {
            let n = self.neighbors(&v);
            let expected = if self.is_boundary(&v) { 1 } else { self.q + 1 };
            if n.len() != expected {
                return Err(ChambrierError::Invariant(format!("vertex {v} has {} neighbors", n.len())));
            }
            if n.iter().any(|w| w.vertex_type() == v.vertex_type() || !self.contains(w)) {
                return Err(ChambrierError::Invariant(format!("vertex {v} breaks the type coloring")));
            }
        }
        Ok(())
    }

    /// Geodesic extension from `v` away from `from` down to the boundary, along the smallest children.
    fn descend(&self, v: &Vertex, from: &Vertex) -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut cur = v.clone();
        let mut prev = from.clone();
        while !self.is_boundary(&cur) {
            let next = (0..self.q as u8).map(|i| cur.child(i)).find(|c| *c != prev).unwrap_or_else(|| cur.up());
            prev = cur;
            cur = next;
            out.push(cur.clone());
        }
        out
    }

    /// Apartment through two boundary vertices.
    pub fn apartment(&self, a: &Vertex, b: &Vertex) -> Result<TreeApartment> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if !self.is_boundary(a) || !self.is_boundary(b) || a == b {
            return Err(ChambrierError::Validation("an apartment joins two distinct boundary vertices".into()));
        }
        Ok(TreeApartment { vertices: geodesic(a, b) })
    }

    /// Apartment containing the geodesic from `a` to `b` (distinct), extended at both ends.
    pub fn apartment_through(&self, a: &Vertex, b: &Vertex) -> Result<TreeApartment> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Err(ChambrierError::Validation("distinct vertices required".into()));
        }
        let path = geodesic(a, b);
        let mut head = self.descend(a, &path[1]);
        head.reverse();
        let tail = self.descend(b, &path[path.len() - 2]);
        let mut vertices = head;
        vertices.extend(path);
        vertices.extend(tail);
        Ok(TreeApartment { vertices })
    }

    /// Apartment containing two chambers.
    pub fn apartment_containing(&self, c: &Chamber, d: &Chamber) -> Result<TreeApartment> {
        self.check_chamber(c)?;
        self.check_chamber(d)?;
        let (c1, c2) = c.endpoints();
        let (d1, d2) = d.endpoints();
        let pairs = [(&c1, &d1), (&c1, &d2), (&c2, &d1), (&c2, &d2)];
        let (x, y) = pairs.iter().max_by_key(|(x, y)| vertex_distance(x, y)).unwrap();
        self.apartment_through(x, y)
    }

    /// Retraction onto `a` centered at the chamber `c` of `a`, as an integer position on the line of `a`.
    pub fn retract(&self, a: &TreeApartment, c: &Chamber, x: &Chamber) -> Result<i64> {
        self.check_chamber(x)?;
        let i = a
            .chamber_position(c)
            .ok_or_else(|| ChambrierError::Validation(format!("chamber {} is not in the apartment", c.name())))?
            as i64;
        let d = chamber_distance(c, x) as i64;
        if d == 0 {
            return Ok(i);
        }
        let (x1, x2) = x.endpoints();
        let left = &a.vertices[i as usize];
        let to_left = vertex_distance(left, &x1).min(vertex_distance(left, &x2));
        let right = &a.vertices[i as usize + 1];
        let to_right = vertex_distance(right, &x1).min(vertex_distance(right, &x2));
        Ok(if to_left < to_right { i - d } else { i + d })
    }

    /// Retraction of the ends through a boundary vertex: the end of `a` its ray from `c` folds onto.
    pub fn retract_end(&self, a: &TreeApartment, c: &Chamber, end: &Vertex) -> Result<LineEnd> {
        self.check_vertex(end)?;
        if !self.is_boundary(end) {
            return Err(ChambrierError::Validation(format!("{end} is not a boundary vertex")));
        }
        let i = a
            .chamber_position(c)
            .ok_or_else(|| ChambrierError::Validation(format!("chamber {} is not in the apartment", c.name())))?;
        let to_left = vertex_distance(&a.vertices[i], end);
        let to_right = vertex_distance(&a.vertices[i + 1], end);
        Ok(if to_left < to_right { LineEnd::Minus } else { LineEnd::Plus })
    }

    pub fn ray(&self, origin: &Vertex, end: &Vertex) -> Result<TreeRay> {
        self.check_vertex(origin)?;
        self.check_vertex(end)?;
        if !self.is_boundary(end) {
            return Err(ChambrierError::Validation(format!("{end} is not a boundary vertex")));
        }
        if origin == end {
            return Err(ChambrierError::WindowExhausted(format!("the ray from {origin} has no direction at this radius")));
        }
        Ok(TreeRay { origin: origin.clone(), end: end.clone() })
    }

    /// Vertices of a ray inside the window.
    pub fn ray_vertices(&self, r: &TreeRay) -> Vec<Vertex> {
        geodesic(&r.origin, &r.end)
    }

    /// Whether `sub` is a subray of `r`.
    pub fn is_subray(&self, sub: &TreeRay, r: &TreeRay) -> bool {
        sub.end == r.end && self.ray_vertices(r).contains(&sub.origin)
    }

    /// Subrays of two rays lying in a common apartment, and that apartment.
    ///
    /// Same end: both rays contain the ray from the median of the two origins and the end.
    /// Distinct ends: each ray enters the geodesic between the two ends at the median of its
    /// origin and the two ends, and follows it from there.
    pub fn rays_common_apartment(&self, r1: &TreeRay, r2: &TreeRay) -> Result<(TreeRay, TreeRay, TreeApartment)> {
        self.ray(&r1.origin, &r1.end)?;
        self.ray(&r2.origin, &r2.end)?;
        if r1.end == r2.end {
            let m = median(&r1.origin, &r2.origin, &r1.end);
            let sub = TreeRay { origin: m.clone(), end: r1.end.clone() };
            let path = geodesic(&m, &r1.end);
            let toward = &path[1];
            // a boundary median already starts an apartment
            let mut vertices = match self.neighbors(&m).into_iter().find(|w| w != toward) {
                Some(back) => {
                    let mut v = self.descend(&back, &m);
                    v.reverse();
                    v.push(back);
                    v
                }
                None => Vec::new(),
            };
            vertices.extend(path);
            return Ok((sub.clone(), sub, TreeApartment { vertices }));
        }
        let m1 = median(&r1.origin, &r1.end, &r2.end);
        let m2 = median(&r2.origin, &r1.end, &r2.end);
        let apt = self.apartment(&r1.end, &r2.end)?;
        Ok((TreeRay { origin: m1, end: r1.end.clone() }, TreeRay { origin: m2, end: r2.end.clone() }, apt))
    }

    /// Whether two rays are parallel: their subrays in a common apartment point the same way.
    pub fn parallel(&self, r1: &TreeRay, r2: &TreeRay) -> Result<bool> {
        let (s1, s2, apt) = self.rays_common_apartment(r1, r2)?;
        let orient = |s: &TreeRay| -> Result<bool> {
            let o = apt.vertex_position(&s.origin);
            let e = apt.vertex_position(&s.end);
            match (o, e) {
                (Some(o), Some(e)) => Ok(e > o),
                _ => Err(ChambrierError::Invariant("subray outside the common apartment".into())),
            }
        };
        Ok(orient(&s1)? == orient(&s2)?)
    }

    /// Same ray at radius `radius + 1`, following the smallest child past the boundary.
    pub fn refine_ray(r: &TreeRay) -> TreeRay {
        TreeRay { origin: r.origin.clone(), end: r.end.child(0) }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vs = self.vertices();
        json!({
            "schema": "chambrier/1",
            "q": self.q,
            "radius": self.radius,
            "base_chamber": [Vertex::root(0).name(), Vertex::root(1).name()],
            "vertices": vs.iter().map(|v| json!({
                "name": v.name(),
                "type": v.vertex_type(),
                "boundary": self.is_boundary(v),
                "neighbors": self.neighbors(v).iter().map(|w| w.name()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph tree {\n  node [shape=circle, fontsize=8];\n");
        for v in self.vertices() {
            let color = if v.vertex_type() == 0 { "white" } else { "gray" };
            let shape = if self.is_boundary(&v) { "doublecircle" } else { "circle" };
            s.push_str(&format!("  {} [style=filled, fillcolor={color}, shape={shape}];\n", v.name()));
        }
        for c in self.chambers() {
            let (a, b) = c.endpoints();
            let attr = if c == Chamber::Base { " [penwidth=3]" } else { "" };
            s.push_str(&format!("  {} -- {}{attr};\n", a.name(), b.name()));
        }
        s.push_str("}\n");
        s
    }
}

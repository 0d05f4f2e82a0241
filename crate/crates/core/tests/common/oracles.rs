//! Reference implementations for alcove windows and trees, written from first principles.
#![allow(dead_code)]

use chambrier::building_kernel::{AlcoveWindow, Chamber, Facet, TreeApartment, TreeBuilding, Vertex};
use chambrier::exact_geometry::{q, Q};
use chambrier::polyhedra::{Rel, Row, System};
use std::collections::{BTreeSet, HashMap, VecDeque};

/// Walls `a = k` strictly between two points off the walls, counted root by root.
pub fn walls_between_points(win: &AlcoveWindow, x: &[Q], y: &[Q]) -> usize {
    let mut count = 0;
    for r in win.roots() {
        let (a, b) = (r.eval(x), r.eval(y));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let mut k = lo.ceil();
        while k < hi {
            if k > lo {
                count += 1;
            }
            k += q(1);
        }
    }
    count
}

/// Whether an open box of floors over the positive roots contains a point.
pub fn floors_realizable(win: &AlcoveWindow, floors: &[i64]) -> bool {
    let mut s = System::new(win.dim());
    for (r, &k) in win.roots().iter().zip(floors) {
        s.push(Row::new(r.coeffs.clone(), q(-k), Rel::Gt));
        s.push(Row::new(r.neg().coeffs, q(k + 1), Rel::Gt));
    }
    s.is_feasible()
}

/// Integer vectors with l1 norm at most `r`.
pub fn l1_ball(n: usize, r: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for k in -r..=r {
        for mut rest in l1_ball(n - 1, r - k.abs()) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

/// Chambers on some minimal gallery, from breadth-first distances in the window graph.
pub fn gallery_hull_by_bfs(win: &AlcoveWindow, set: &[usize]) -> BTreeSet<usize> {
    let dist: Vec<Vec<Option<usize>>> = (0..win.len()).map(|i| win.window_distances(i)).collect();
    let mut hull: BTreeSet<usize> = set.iter().copied().collect();
    loop {
        let members: Vec<usize> = hull.iter().copied().collect();
        let mut grown = hull.clone();
        for &a in &members {
            for &b in &members {
                let dab = dist[a][b].unwrap();
                for x in 0..win.len() {
                    if let (Some(p), Some(r)) = (dist[a][x], dist[x][b]) {
                        if p + r == dab {
                            grown.insert(x);
                        }
                    }
                }
            }
        }
        if grown == hull {
            return hull;
        }
        hull = grown;
    }
}

/// Alcoves whose closure contains a facet, by closed-box feasibility of the facet's points.
pub fn star_by_points(win: &AlcoveWindow, f: &Facet) -> BTreeSet<usize> {
    let p = win.facet_point(f).unwrap();
    (0..win.len())
        .filter(|&i| {
            win.roots().iter().zip(&win.alcoves[i].floors).all(|(r, &k)| {
                let v = r.eval(&p);
                q(k) <= v && v <= q(k + 1)
            })
        })
        .collect()
}

/// Explicit adjacency of the truncated tree, built by growing children from the base edge.
pub struct TreeGraph {
    pub adj: HashMap<Vertex, Vec<Vertex>>,
}

impl TreeGraph {
    pub fn new(q: usize, radius: usize) -> TreeGraph {
        let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
        let r0 = Vertex { side: 0, digits: vec![] };
        let r1 = Vertex { side: 1, digits: vec![] };
        adj.entry(r0.clone()).or_default().push(r1.clone());
        adj.entry(r1.clone()).or_default().push(r0.clone());
        let mut queue = VecDeque::from([r0, r1]);
        while let Some(v) = queue.pop_front() {
            if v.digits.len() == radius {
                continue;
            }
            for i in 0..q as u8 {
                let mut digits = v.digits.clone();
                digits.push(i);
                let c = Vertex { side: v.side, digits };
                adj.entry(v.clone()).or_default().push(c.clone());
                adj.entry(c.clone()).or_default().push(v.clone());
                queue.push_back(c);
            }
        }
        TreeGraph { adj }
    }

    pub fn bfs(&self, from: &Vertex) -> HashMap<Vertex, usize> {
        let mut dist = HashMap::from([(from.clone(), 0usize)]);
        let mut queue = VecDeque::from([from.clone()]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for w in &self.adj[&v] {
                if !dist.contains_key(w) {
                    dist.insert(w.clone(), d + 1);
                    queue.push_back(w.clone());
                }
            }
        }
        dist
    }

    /// Path between two vertices by parent pointers of a breadth-first search.
    pub fn path(&self, a: &Vertex, b: &Vertex) -> Vec<Vertex> {
        let mut parent: HashMap<Vertex, Vertex> = HashMap::new();
        let mut queue = VecDeque::from([a.clone()]);
        let mut seen = BTreeSet::from([a.clone()]);
        while let Some(v) = queue.pop_front() {
            if v == *b {
                break;
            }
            for w in &self.adj[&v] {
                if seen.insert(w.clone()) {
                    parent.insert(w.clone(), v.clone());
                    queue.push_back(w.clone());
                }
            }
        }
        let mut out = vec![b.clone()];
        let mut cur = b.clone();
        while cur != *a {
            cur = parent[&cur].clone();
            out.push(cur.clone());
        }
        out.reverse();
        out
    }

    pub fn leaves(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = self.adj.iter().filter(|(_, n)| n.len() == 1).map(|(v, _)| v.clone()).collect();
        v.sort();
        v
    }

    /// Every maximal geodesic of the truncated tree, as vertex paths between leaves.
    pub fn apartments(&self) -> Vec<Vec<Vertex>> {
        let leaves = self.leaves();
        let mut out = Vec::new();
        for (i, a) in leaves.iter().enumerate() {
            for b in &leaves[i + 1..] {
                out.push(self.path(a, b));
            }
        }
        out
    }
}

pub fn edge_set(path: &[Vertex]) -> BTreeSet<(Vertex, Vertex)> {
    path.windows(2).map(|p| if p[0] < p[1] { (p[0].clone(), p[1].clone()) } else { (p[1].clone(), p[0].clone()) }).collect()
}

pub fn chamber_key(c: &Chamber) -> (Vertex, Vertex) {
    let (a, b) = c.endpoints();
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Retraction through an isomorphism: put `c` and `x` in one apartment `B`, then carry
/// `x` to `a` by the isometry of lines fixing `c`.
pub fn retract_by_isomorphism(g: &TreeGraph, a: &TreeApartment, c: &Chamber, x: &Chamber) -> i64 {
    let (c1, c2) = c.endpoints();
    let (x1, x2) = x.endpoints();
    let mut best: Option<Vec<Vertex>> = None;
    for u in [&c1, &c2] {
        for v in [&x1, &x2] {
            let p = if u == v { vec![u.clone()] } else { g.path(u, v) };
            if best.as_ref().map_or(true, |b| p.len() > b.len()) {
                best = Some(p);
            }
        }
    }
    let b = best.unwrap();
    if b.len() == 2 {
        return a.chamber_position(c).unwrap() as i64;
    }
    let i = a.chamber_position(c).unwrap() as i64;
    let pos = |v: &Vertex| b.iter().position(|w| w == v).unwrap() as i64;
    let j = pos(&c1).min(pos(&c2));
    let p = pos(&x1).min(pos(&x2));
    let same = b[j as usize] == a.vertices[i as usize];
    if same {
        i + (p - j)
    } else {
        i - (p - j)
    }
}

/// Canonical apartment through two adjacent chambers.
pub fn apartment_for_pair(t: &TreeBuilding, c1: &Chamber, c2: &Chamber) -> TreeApartment {
    t.apartment_containing(c1, c2).unwrap()
}

/// Adjacent chamber pairs `(c1, c2)` of the window, both orders.
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

/// Classical end space of the truncated tree: ends are the rays from a fixed vertex to the
/// leaves, a basic neighborhood of an end is the component of the tree minus a vertex that
/// contains a tail of it, and interior points have metric balls.
pub struct EndsOracle {
    pub g: TreeGraph,
}

fn oracle_edge_name(a: &Vertex, b: &Vertex) -> String {
    let (a, b) = (a.name(), b.name());
    if a < b {
        format!("e:{a}|{b}")
    } else {
        format!("e:{b}|{a}")
    }
}

impl EndsOracle {
    pub fn new(q: usize, radius: usize) -> EndsOracle {
        EndsOracle { g: TreeGraph::new(q, radius) }
    }

    pub fn point_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (v, ns) in &self.g.adj {
            out.insert(format!("v:{}", v.name()));
            for w in ns {
                out.insert(oracle_edge_name(v, w));
            }
        }
        for l in self.g.leaves() {
            out.insert(format!("end:{}", l.name()));
        }
        out
    }

    /// Component of the tree minus `v` containing its neighbor `w`.
    pub fn component(&self, v: &Vertex, w: &Vertex) -> BTreeSet<Vertex> {
        let mut seen = BTreeSet::from([w.clone()]);
        let mut queue = VecDeque::from([w.clone()]);
        while let Some(x) = queue.pop_front() {
            for y in &self.g.adj[&x] {
                if y != v && seen.insert(y.clone()) {
                    queue.push_back(y.clone());
                }
            }
        }
        seen
    }

    /// Points of the component of the tree minus `v` containing `w`, with its ends.
    pub fn basic_open(&self, v: &Vertex, w: &Vertex) -> BTreeSet<String> {
        let comp = self.component(v, w);
        let mut out = BTreeSet::new();
        for x in &comp {
            out.insert(format!("v:{}", x.name()));
            for y in &self.g.adj[x] {
                if y == v || comp.contains(y) {
                    out.insert(oracle_edge_name(x, y));
                }
            }
            if self.g.adj[x].len() == 1 {
                out.insert(format!("end:{}", x.name()));
            }
        }
        out
    }

    /// A leaf in the component of the tree minus `v` containing `w`.
    pub fn some_end_through(&self, v: &Vertex, w: &Vertex) -> Option<Vertex> {
        self.component(v, w).into_iter().find(|x| self.g.adj[x].len() == 1)
    }

    /// For every vertex other than `b`, its first step towards `b`.
    pub fn first_steps_to(&self, b: &Vertex) -> HashMap<Vertex, Vertex> {
        let mut out = HashMap::new();
        let mut queue = VecDeque::from([b.clone()]);
        let mut seen = BTreeSet::from([b.clone()]);
        while let Some(x) = queue.pop_front() {
            for y in &self.g.adj[&x] {
                if seen.insert(y.clone()) {
                    out.insert(y.clone(), x.clone());
                    queue.push_back(y.clone());
                }
            }
        }
        out
    }

    /// Interior points at distance less than `half / 2` from the center, a vertex or the
    /// midpoint of the edge between two vertices.
    pub fn ball(&self, center: &[Vertex], half: usize) -> BTreeSet<String> {
        let dists: Vec<HashMap<Vertex, usize>> = center.iter().map(|c| self.g.bfs(c)).collect();
        let d = |x: &Vertex| dists.iter().map(|m| m[x]).min().unwrap();
        let off = center.len() - 1;
        let mut out = BTreeSet::new();
        for (x, ns) in &self.g.adj {
            if 2 * d(x) + off < half {
                out.insert(format!("v:{}", x.name()));
            }
            for y in ns {
                let is_center = center.len() == 2 && center.contains(x) && center.contains(y);
                let h = if is_center { 0 } else { 2 * d(x).min(d(y)) + 1 + off };
                if h < half {
                    out.insert(oracle_edge_name(x, y));
                }
            }
        }
        out
    }
}

use std::collections::BTreeSet;

use super::cone::Cone;
use super::fan::Fan;
use crate::exact_geometry::linalg::{LinForm, Mat};
use crate::exact_geometry::root_system::{diagram_components, RootSystem};
use crate::exact_geometry::weyl::{enumerate_weyl, parabolic_subgroup};

/// All subsets of `0..n` in increasing size, then lexicographic order.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (0u32..(1u32 << n))
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect();
    all.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    all
}

/// Weyl facet of the closed base chamber with type `t`: `alpha_i = 0` on `t`, positive elsewhere.
pub fn base_facet(rs: &RootSystem, t: &[usize]) -> Cone {
    let eq: Vec<LinForm> = t.iter().map(|&i| rs.simple_roots[i].clone()).collect();
    let gt: Vec<LinForm> = (0..rs.rank)
        .filter(|i| !t.contains(i))
        .map(|i| rs.simple_roots[i].clone())
        .collect();
    Cone::canonicalize(rs.rank, &eq, &gt).expect("facets of the base chamber are nonempty")
}

/// Generators not adjacent in the diagram to any element of `i`.
pub fn perp(rs: &RootSystem, i: &[usize]) -> Vec<usize> {
    (0..rs.rank)
        .filter(|&t| i.iter().all(|&k| rs.cartan[t][k] == 0 && t != k))
        .collect()
}

/// Whether a type is admissible: none of its diagram components lies inside `j`.
pub fn is_admissible(rs: &RootSystem, j: &[usize], t: &[usize]) -> bool {
    diagram_components(&rs.cartan, t)
        .iter()
        .all(|comp| !comp.iter().all(|x| j.contains(x)))
}

/// Admissible types of facets of the closed base chamber.
pub fn admissible_facets(rs: &RootSystem, j: &[usize]) -> Vec<Vec<usize>> {
    subsets(rs.rank).into_iter().filter(|t| is_admissible(rs, j, t)).collect()
}

/// The sets `L = J cap I^perp` and `K = S minus (I cup L)`.
pub fn split_types(rs: &RootSystem, j: &[usize], i: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let l: Vec<usize> = perp(rs, i).into_iter().filter(|x| j.contains(x)).collect();
    let k: Vec<usize> = (0..rs.rank).filter(|x| !i.contains(x) && !l.contains(x)).collect();
    (l, k)
}

/// `J.f` for the admissible facet of type `i`, in inequality form:
/// `alpha_i = 0` for `i` in `I`, `w(alpha_k) > 0` for `k` in `K` and `w` in `W_L`.
pub fn jf_cone(rs: &RootSystem, j: &[usize], i: &[usize]) -> Cone {
    let (l, k) = split_types(rs, j, i);
    let wl = parabolic_subgroup(rs, &l);
    let eq: Vec<LinForm> = i.iter().map(|&x| rs.simple_roots[x].clone()).collect();
    let mut gt = Vec::new();
    for w in &wl {
        let winv = w.inverse().unwrap();
        for &kk in &k {
            gt.push(LinForm::new(winv.left_apply(&rs.simple_roots[kk].coeffs)));
        }
    }
    Cone::canonicalize(rs.rank, &eq, &gt).expect("J.f is nonempty")
}

/// The Weyl facets making up `J.f`: `W_L`-translates of the base facets with types
/// between `I` and `I cup L`.
pub fn jf_facets(rs: &RootSystem, j: &[usize], i: &[usize]) -> Vec<Cone> {
    let (l, _) = split_types(rs, j, i);
    let wl = parabolic_subgroup(rs, &l);
    let mut out: BTreeSet<Cone> = BTreeSet::new();
    for extra in subsets(l.len()) {
        let mut t: Vec<usize> = i.to_vec();
        t.extend(extra.iter().map(|&e| l[e]));
        t.sort();
        let f = base_facet(rs, &t);
        for w in &wl {
            let winv: Mat = w.inverse().unwrap();
            out.insert(f.transform_by_inverse(&winv).unwrap());
        }
    }
    out.into_iter().collect()
}

/// The cone decomposition obtained by merging Weyl facets across panels of types in `j`.
pub fn build_fj(rs: &RootSystem, j: &[usize]) -> Fan {
    let weyl = enumerate_weyl(rs);
    let mut cones: BTreeSet<Cone> = BTreeSet::new();
    for i in admissible_facets(rs, j) {
        let c = jf_cone(rs, j, &i);
        for w in &weyl {
            cones.insert(c.transform_by_inverse(&w.inverse).unwrap());
        }
    }
    Fan::new(&rs.label, j, rs.rank, cones.into_iter().collect())
}

/// Whether `j` contains a connected component of the whole diagram.
pub fn contains_component(rs: &RootSystem, j: &[usize]) -> bool {
    rs.components.iter().any(|c| c.iter().all(|x| j.contains(x)))
}

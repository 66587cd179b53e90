//! Prime power Hecke graphs G_O^p(φ).

use crate::arith::{is_prime, rat};
use crate::emb::{conjugate_c, reduce_c, Embedding};
use crate::error::{Error, Result};
use crate::hecke::{ClassRegistry, EmbSum};
use crate::qnum::{is_p_fundamental, kronecker, prime_form_order, tower_exponent, Discriminant};
use crate::quat::Coords;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write;

#[derive(Clone, Debug)]
pub struct Vertex {
    pub level: u32,
    pub g: Coords,
    pub d: u64,
    /// Whether all Θ(p)-neighbors of this vertex were computed.
    pub expanded: bool,
}

#[derive(Clone, Debug)]
pub struct HeckeGraph {
    pub p: u64,
    pub d: Discriminant,
    pub max_level: u32,
    pub vertices: Vec<Vertex>,
    /// Undirected edges (i <= j), a double edge appears twice.
    pub edges: Vec<(usize, usize)>,
    /// Loop vertex and whether it is oriented.
    pub loop_at: Option<(usize, bool)>,
    pub double_edge: Option<(usize, usize)>,
    order: std::sync::Arc<crate::quat::EichlerOrder>,
}

/// Build G_O^p(φ) up to `max_level` by breadth-first conjugation with Θ(p).
pub fn build_graph(phi: &Embedding, p: u64, max_level: u32) -> Result<HeckeGraph> {
    let order = phi.order.clone();
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if order.reduced_discriminant().is_multiple_of(p) {
        return Err(Error::Precondition(format!("{p} divides the reduced discriminant")));
    }
    if !is_p_fundamental(phi.d, p) {
        return Err(Error::NotPFundamental { d: phi.d.get(), p });
    }
    let theta = order.theta_c(p)?;
    let d = phi.d.get();
    let mut reg = ClassRegistry::new(order.clone());
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    let root = reg.classify(phi.coords());
    index.insert(root, 0);
    vertices.push(Vertex {
        level: 0,
        g: *phi.coords(),
        d,
        expanded: false,
    });
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if vertices[v].level >= max_level {
            continue;
        }
        let g = vertices[v].g;
        for pi in &theta {
            let (dd, y) = conjugate_c(&order, &g, pi);
            let y = reduce_c(&order, &y);
            let level =
                level_of(dd as u64, d, p).ok_or_else(|| Error::Internal(format!("unexpected discriminant {dd}")))?;
            let id = reg.classify(&y);
            let w = match index.get(&id) {
                Some(&w) => w,
                None => {
                    let w = vertices.len();
                    index.insert(id, w);
                    vertices.push(Vertex {
                        level,
                        g: y,
                        d: dd as u64,
                        expanded: false,
                    });
                    queue.push_back(w);
                    w
                }
            };
            edges.insert((v.min(w), v.max(w)));
        }
        vertices[v].expanded = true;
    }
    let kind = kronecker(d as i128, p);
    let level0: Vec<usize> = (0..vertices.len()).filter(|&i| vertices[i].level == 0).collect();
    let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
    let mut loop_at = None;
    if let Some(&(a, _)) = edges.iter().find(|(a, b)| a == b) {
        loop_at = Some((a, kind == 0 && level0.len() == 1));
    }
    let mut double_edge = None;
    if kind == 1 && level0.len() == 2 {
        let pair = (level0[0], level0[1]);
        if edges.contains(&pair) {
            edges.push(pair);
            edges.sort_unstable();
            double_edge = Some(pair);
        }
    }
    Ok(HeckeGraph {
        p,
        d: phi.d,
        max_level,
        vertices,
        edges,
        loop_at,
        double_edge,
        order,
    })
}

fn level_of(dd: u64, d: u64, p: u64) -> Option<u32> {
    let mut k = 0;
    let mut cur = d;
    while cur < dd {
        cur *= p * p;
        k += 1;
    }
    (cur == dd).then_some(k)
}

impl HeckeGraph {
    pub fn level_count(&self, k: u32) -> usize {
        self.vertices.iter().filter(|v| v.level == k).count()
    }

    /// Neighbors of v with the number of length-1 paths to each.
    pub fn neighbors(&self, v: usize) -> BTreeMap<usize, u64> {
        let mut out = BTreeMap::new();
        for &(a, b) in &self.edges {
            if a == v && b == v {
                let oriented = matches!(self.loop_at, Some((_, true)));
                *out.entry(v).or_insert(0) += if oriented { 1 } else { 2 };
            } else if a == v {
                *out.entry(b).or_insert(0) += 1;
            } else if b == v {
                *out.entry(a).or_insert(0) += 1;
            }
        }
        out
    }

    pub fn embedding(&self, v: usize) -> Embedding {
        let x = &self.vertices[v];
        Embedding::from_coords_unchecked(self.order.clone(), Discriminant::new(x.d).unwrap(), x.g)
    }

    /// T_p[v] read off the graph.
    pub fn read_tp(&self, v: usize) -> Result<EmbSum> {
        let vert = &self.vertices[v];
        if !vert.expanded {
            return Err(Error::OutsideLevels);
        }
        let mut out = EmbSum::zero(self.order.clone());
        for (w, paths) in self.neighbors(v) {
            let lw = self.vertices[w].level;
            let c = if lw >= vert.level {
                paths
            } else {
                tower_exponent(self.d, self.p, vert.level)
            };
            out.add_term(&self.embedding(w), &rat(c as i64));
        }
        Ok(out)
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v).into_keys() {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Check the graph against the structure theorem; returns the violations found.
    pub fn validate_shape(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let p = self.p;
        let d = self.d;
        let kind = kronecker(d.as_i128(), p);
        let level0: Vec<usize> = (0..self.vertices.len())
            .filter(|&i| self.vertices[i].level == 0)
            .collect();
        let n0 = level0.len();
        let has_loop = self.edges.iter().any(|(a, b)| a == b);
        let oriented = matches!(self.loop_at, Some((_, true)));
        match kind {
            -1 => {
                if n0 != 1 {
                    bad.push(format!("inert: expected 1 level-0 vertex, found {n0}"));
                }
                if has_loop {
                    bad.push("inert: unexpected loop".into());
                }
            }
            0 => match prime_form_order(d, p) {
                Ok(1) => {
                    if n0 != 1 || !has_loop || !oriented {
                        bad.push(format!("ramified principal: expected one vertex with a directed loop, found {n0} vertices, loop {has_loop}"));
                    }
                }
                Ok(_) => {
                    let single = n0 == 2 && self.edges.iter().filter(|&&e| e == (level0[0], level0[1])).count() == 1;
                    if !single || has_loop {
                        bad.push(format!(
                            "ramified non-principal: expected two vertices joined by one edge, found {n0}"
                        ));
                    }
                }
                Err(e) => bad.push(format!("prime form order: {e}")),
            },
            _ => match prime_form_order(d, p) {
                Ok(ord) => {
                    if n0 as u64 != ord {
                        bad.push(format!("split: level-0 cycle length {n0}, prime form order {ord}"));
                    }
                    match n0 {
                        1 => {
                            if !has_loop || oriented {
                                bad.push("split: expected an undirected loop".into());
                            }
                        }
                        2 => {
                            if self.double_edge.is_none()
                                || self.edges.iter().filter(|&&e| e == (level0[0], level0[1])).count() != 2
                            {
                                bad.push("split: expected a double edge".into());
                            }
                        }
                        _ => {
                            if has_loop || self.double_edge.is_some() {
                                bad.push("split: unexpected loop or double edge".into());
                            }
                            for &v in &level0 {
                                let same = self
                                    .neighbors(v)
                                    .keys()
                                    .filter(|&&w| self.vertices[w].level == 0)
                                    .count();
                                if same != 2 {
                                    bad.push(format!("split: level-0 vertex {v} has {same} level-0 neighbors"));
                                }
                            }
                        }
                    }
                }
                Err(e) => bad.push(format!("prime form order: {e}")),
            },
        }
        for (v, vert) in self.vertices.iter().enumerate() {
            let k = vert.level;
            if vert.d != d.get() * p.pow(2 * k) {
                bad.push(format!("vertex {v}: discriminant {} does not match level {k}", vert.d));
            }
            let nb = self.neighbors(v);
            if k > 0 {
                let down = nb.keys().filter(|&&w| self.vertices[w].level + 1 == k).count();
                if down != 1 {
                    bad.push(format!("vertex {v}: {down} neighbors one level down"));
                }
            }
            if vert.expanded {
                let up = nb.keys().filter(|&&w| self.vertices[w].level == k + 1).count() as u64;
                let dk = d.get() * p.pow(2 * k);
                let expected = (p as i64 - kronecker(dk as i128, p) as i64) as u64 / tower_exponent(d, p, k + 1);
                if up != expected {
                    bad.push(format!("vertex {v}: {up} up-neighbors, expected {expected}"));
                }
            }
        }
        if !self.is_connected() {
            bad.push("graph is not connected".into());
        }
        bad
    }

    /// Vertex names "Lk_i": level k, i-th vertex of that level.
    pub fn names(&self) -> Vec<String> {
        let mut per_level: BTreeMap<u32, usize> = BTreeMap::new();
        self.vertices
            .iter()
            .map(|v| {
                let c = per_level.entry(v.level).or_insert(0);
                let name = format!("L{}_{}", v.level, c);
                *c += 1;
                name
            })
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let names = self.names();
        let mut s = String::new();
        writeln!(s, "digraph hecke_p{}_D{} {{", self.p, self.d).unwrap();
        writeln!(s, "  rankdir=LR;").unwrap();
        let top = self.vertices.iter().map(|v| v.level).max().unwrap_or(0);
        for k in 0..=top {
            let members: Vec<&str> = names
                .iter()
                .zip(&self.vertices)
                .filter(|(_, v)| v.level == k)
                .map(|(n, _)| n.as_str())
                .collect();
            writeln!(s, "  {{ rank=same; {}; }}", members.join("; ")).unwrap();
        }
        for (n, v) in names.iter().zip(&self.vertices) {
            writeln!(s, "  {n} [label=\"D={}\"];", v.d).unwrap();
        }
        for &(a, b) in &self.edges {
            if a == b && matches!(self.loop_at, Some((_, true))) {
                writeln!(s, "  {} -> {};", names[a], names[b]).unwrap();
            } else {
                writeln!(s, "  {} -> {} [dir=none];", names[a], names[b]).unwrap();
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> Value {
        let verts: Vec<Value> = self
            .vertices
            .iter()
            .map(|v| {
                let g = self.order.elem(&v.g);
                json!({"level": v.level, "g": crate::io::elem_to_json(&g), "D": v.d})
            })
            .collect();
        json!({
            "p": self.p,
            "D": self.d.get(),
            "max_level": self.max_level,
            "vertices": verts,
            "edges": self.edges.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "loop": self.loop_at.map(|(v, o)| json!({"vertex": v, "oriented": o})),
            "double_edge": self.double_edge.map(|(a, b)| json!([a, b])),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;
    use crate::emb::find_embedding;
    use crate::hecke::hecke_t;
    use crate::quat::{EichlerOrder, QuatAlgebra, QuatElem};
    use std::sync::Arc;

    fn ex61() -> Arc<EichlerOrder> {
        let alg = QuatAlgebra::new(7, 5).unwrap();
        let h = rat_frac(1, 2);
        let basis = vec![
            QuatElem::from_ints([1, 0, 0, 0]),
            QuatElem::from_ints([0, 1, 0, 0]),
            QuatElem::new([h.clone(), rat(0), h.clone(), rat(0)]),
            QuatElem::new([rat(0), h.clone(), rat(0), h]),
        ];
        Arc::new(EichlerOrder::new(alg, basis, 1).unwrap())
    }

    fn check(d: u64, p: u64, max_level: u32) -> HeckeGraph {
        let o = ex61();
        let phi = find_embedding(&o, Discriminant::new(d).unwrap()).unwrap();
        let g = build_graph(&phi, p, max_level).unwrap();
        assert!(g.validate_shape().is_empty(), "D={d} p={p}: {:?}", g.validate_shape());
        for v in 0..g.vertices.len() {
            if g.vertices[v].expanded {
                let t = hecke_t(p, &EmbSum::single(&g.embedding(v)));
                assert_eq!(g.read_tp(v).unwrap(), t, "D={d} p={p} vertex {v}");
            }
        }
        g
    }

    #[test]
    fn inert_shape() {
        let g = check(5, 3, 2);
        assert_eq!(g.level_count(0), 1);
        assert_eq!(g.level_count(1), 2);
        assert!(g.loop_at.is_none());
    }

    #[test]
    fn two_adic_shape() {
        let g = check(5, 2, 2);
        assert_eq!(g.level_count(1), 1);
    }

    #[test]
    fn ramified_shapes() {
        let one = check(33, 3, 2);
        assert_eq!(one.level_count(0), 1);
        assert_eq!(one.loop_at, Some((0, true)));
        let two = check(12, 3, 2);
        assert_eq!(two.level_count(0), 2);
        assert!(two.loop_at.is_none());
    }
}

//! Combinatorial instances (graphs, set systems, multiway-cut instances),
//! their standard-form LP encodings, and the file loaders.
//!
//! Every encoder converts inequality rows to equalities with slack variables
//! and keeps `[0,1]` bounds on decision variables (box bounds are not
//! materialized as rows). Decision variables always come first in the column
//! order, so decoding a solution is a prefix slice.

use std::collections::HashMap;
use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lp::{Sense, SparseMatrix, StandardFormLp};
use crate::scd::Block;

// ---- graphs ----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub cost: f64,
}

/// Undirected graph with nonnegative edge costs and per-vertex costs
/// (unit by default). Self-loops are rejected; duplicate edges are merged
/// with their costs summed.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    vertex_costs: Vec<f64>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(n: usize, raw_edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut merged: HashMap<(usize, usize), f64> = HashMap::new();
        let mut order: Vec<(usize, usize)> = Vec::new();
        for &(u, v, c) in raw_edges {
            if u >= n || v >= n {
                return Err(Error::InvalidConfig(format!(
                    "edge ({u},{v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidConfig(format!("self-loop at vertex {u}")));
            }
            if c < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "negative cost {c} on edge ({u},{v})"
                )));
            }
            let key = (u.min(v), u.max(v));
            match merged.get_mut(&key) {
                Some(acc) => *acc += c,
                None => {
                    merged.insert(key, c);
                    order.push(key);
                }
            }
        }
        let edges: Vec<Edge> = order
            .into_iter()
            .map(|(u, v)| Edge {
                u,
                v,
                cost: merged[&(u, v)],
            })
            .collect();
        let mut adj = vec![Vec::new(); n];
        for (e, edge) in edges.iter().enumerate() {
            adj[edge.u].push((edge.v, e));
            adj[edge.v].push((edge.u, e));
        }
        Ok(Self {
            n,
            edges,
            vertex_costs: vec![1.0; n],
            adj,
        })
    }

    /// Unit-cost edges.
    pub fn unit(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let raw: Vec<(usize, usize, f64)> = pairs.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        Self::new(n, &raw)
    }

    /// Seeded G(n, p) random graph.
    pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    pairs.push((u, v));
                }
            }
        }
        Graph::unit(n, &pairs).expect("generated edges are valid")
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_costs(&self) -> &[f64] {
        &self.vertex_costs
    }

    pub fn set_vertex_costs(&mut self, costs: Vec<f64>) -> Result<()> {
        if costs.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} costs for {} vertices",
                costs.len(),
                self.n
            )));
        }
        if costs.iter().any(|c| *c < 0.0) {
            return Err(Error::InvalidConfig("negative vertex cost".into()));
        }
        self.vertex_costs = costs;
        Ok(())
    }

    pub fn has_unit_vertex_costs(&self) -> bool {
        self.vertex_costs.iter().all(|&c| c == 1.0)
    }

    /// Neighbors of `v` as `(neighbor, edge index)` pairs.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            comp[start] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for &(w, _) in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            out.push(members);
        }
        out
    }

    /// One ≥-row per edge: `x_u + x_v >= 1`.
    pub fn covering_constraints(&self) -> CoveringConstraints {
        CoveringConstraints {
            num_vars: self.n,
            rows: self
                .edges
                .iter()
                .map(|e| vec![(e.u, 1.0), (e.v, 1.0)])
                .collect(),
            rhs: vec![1.0; self.edges.len()],
            bound_scale: 1.0,
        }
    }
}

// ---- set systems ------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SetDef {
    /// `(element, weight)` pairs; weights must be positive.
    pub elements: Vec<(usize, f64)>,
    pub cost: f64,
}

/// Universe of `num_elements` elements plus weighted sets.
#[derive(Debug, Clone)]
pub struct SetSystem {
    num_elements: usize,
    sets: Vec<SetDef>,
}

impl SetSystem {
    pub fn new(num_elements: usize, sets: Vec<SetDef>) -> Result<Self> {
        for (s, def) in sets.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for &(a, w) in &def.elements {
                if a >= num_elements {
                    return Err(Error::InvalidConfig(format!(
                        "set {s} references element {a} outside universe of {num_elements}"
                    )));
                }
                if !(w > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "set {s} has non-positive weight {w} on element {a}"
                    )));
                }
                if !seen.insert(a) {
                    return Err(Error::InvalidConfig(format!(
                        "set {s} lists element {a} twice"
                    )));
                }
            }
            if def.cost < 0.0 {
                return Err(Error::InvalidConfig(format!("set {s} has negative cost")));
            }
        }
        Ok(Self { num_elements, sets })
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[SetDef] {
        &self.sets
    }

    /// For each element, the sets containing it (with weights).
    pub fn element_index(&self) -> Vec<Vec<(usize, f64)>> {
        let mut idx = vec![Vec::new(); self.num_elements];
        for (s, def) in self.sets.iter().enumerate() {
            for &(a, w) in &def.elements {
                idx[a].push((s, w));
            }
        }
        idx
    }

    /// Max number of sets any single element appears in.
    pub fn max_frequency(&self) -> usize {
        let mut count = vec![0usize; self.num_elements];
        for def in &self.sets {
            for &(a, _) in &def.elements {
                count[a] += 1;
            }
        }
        count.into_iter().max().unwrap_or(0)
    }

    /// Independent set as set packing: sets are vertices, elements are edges,
    /// all weights 1. The column sparsity equals the max vertex degree.
    pub fn mis_from_graph(g: &Graph) -> SetSystem {
        let sets = (0..g.num_vertices())
            .map(|v| SetDef {
                elements: g.neighbors(v).iter().map(|&(_, e)| (e, 1.0)).collect(),
                cost: g.vertex_costs()[v],
            })
            .collect();
        SetSystem {
            num_elements: g.num_edges(),
            sets,
        }
    }

    /// One ≥-row per element with unit coefficients: Σ_{s : a ∈ s} x_s >= 1.
    pub fn covering_constraints(&self) -> CoveringConstraints {
        let idx = self.element_index();
        CoveringConstraints {
            num_vars: self.sets.len(),
            rows: idx
                .iter()
                .map(|sets| sets.iter().map(|&(s, _)| (s, 1.0)).collect())
                .collect(),
            rhs: vec![1.0; self.num_elements],
            bound_scale: 1.0,
        }
    }
}

// ---- multiway cut -----------------------------------------------------------

#[derive(Debug, Clone)]
pub struct MultiwayInstance {
    pub graph: Graph,
    pub terminals: Vec<usize>,
}

impl MultiwayInstance {
    pub fn new(graph: Graph, terminals: Vec<usize>) -> Result<Self> {
        if terminals.len() < 2 {
            return Err(Error::InvalidConfig("need at least 2 terminals".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &t in &terminals {
            if t >= graph.num_vertices() {
                return Err(Error::InvalidConfig(format!("terminal {t} out of range")));
            }
            if !seen.insert(t) {
                return Err(Error::InvalidConfig(format!("terminal {t} repeated")));
            }
        }
        Ok(Self { graph, terminals })
    }

    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    /// Relaxation objective `(1/2) Σ_e c_e Σ_i |x_u^i - x_v^i|` at the given
    /// per-vertex simplex coordinates (flattened `v * k + i`).
    pub fn fractional_cut_objective(&self, vertex_fracs: &[f64]) -> f64 {
        let k = self.k();
        let mut total = 0.0;
        for e in self.graph.edges() {
            let mut dist = 0.0;
            for i in 0..k {
                dist += (vertex_fracs[e.u * k + i] - vertex_fracs[e.v * k + i]).abs();
            }
            total += e.cost * dist;
        }
        0.5 * total
    }

    /// Cost of an integral assignment (vertex -> terminal index).
    pub fn cut_cost(&self, assignment: &[usize]) -> f64 {
        self.graph
            .edges()
            .iter()
            .filter(|e| assignment[e.u] != assignment[e.v])
            .map(|e| e.cost)
            .sum()
    }
}

// ---- constraint views consumed by repair/rounding ---------------------------

/// Covering constraints `A x >= b` over `[0,1]` variables in their natural
/// (pre-slack) form. `bound_scale` is the coefficient the implicit
/// `x_i <= 1` rows carry in the data triple: scaling an instance by λ turns
/// them into `λ x_i <= λ`, which matters for condition-number estimates.
#[derive(Debug, Clone)]
pub struct CoveringConstraints {
    pub num_vars: usize,
    pub rows: Vec<Vec<(usize, f64)>>,
    pub rhs: Vec<f64>,
    pub bound_scale: f64,
}

impl CoveringConstraints {
    pub fn row_value(&self, j: usize, x: &[f64]) -> f64 {
        self.rows[j].iter().map(|&(i, a)| a * x[i]).sum()
    }

    /// Equivalent instance with all data scaled by `lambda` (rows, rhs and
    /// the implicit bound rows alike).
    pub fn scale_by(&self, lambda: f64) -> CoveringConstraints {
        CoveringConstraints {
            num_vars: self.num_vars,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&(i, a)| (i, lambda * a)).collect())
                .collect(),
            rhs: self.rhs.iter().map(|b| lambda * b).collect(),
            bound_scale: lambda * self.bound_scale,
        }
    }

    /// Slack-form standard LP: `A x - z = b`, decisions in `[0,1]`, slacks in
    /// `[0, inf)`.
    pub fn to_standard_form(&self, costs: &[f64]) -> Result<StandardFormLp> {
        if costs.len() != self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "{} costs for {} variables",
                costs.len(),
                self.num_vars
            )));
        }
        let m = self.rows.len();
        let n = self.num_vars + m;
        let mut triplets = Vec::new();
        for (j, row) in self.rows.iter().enumerate() {
            for &(i, a) in row {
                triplets.push((j, i, a));
            }
            triplets.push((j, self.num_vars + j, -1.0));
        }
        let matrix = SparseMatrix::from_triplets(m, n, &triplets)?;
        let mut cost = costs.to_vec();
        cost.extend(std::iter::repeat(0.0).take(m));
        let mut lp = StandardFormLp::new(matrix, self.rhs.clone(), cost, Sense::Minimize)?;
        for i in 0..self.num_vars {
            lp.set_bounds(i, 0.0, 1.0)?;
        }
        Ok(lp)
    }
}

/// Packing constraints `rows · x <= caps` over `[0,1]` variables.
#[derive(Debug, Clone)]
pub struct PackingConstraints {
    pub num_vars: usize,
    pub rows: Vec<Vec<(usize, f64)>>,
    pub caps: Vec<f64>,
}

impl PackingConstraints {
    pub fn row_value(&self, j: usize, x: &[f64]) -> f64 {
        self.rows[j].iter().map(|&(i, a)| a * x[i]).sum()
    }

    pub fn min_cap(&self) -> f64 {
        self.caps.iter().fold(f64::INFINITY, |a, &b| a.min(b))
    }
}

// ---- encoders ---------------------------------------------------------------

#[derive(Debug)]
pub struct VertexCoverLp {
    pub lp: StandardFormLp,
    pub n_vertices: usize,
    pub n_edges: usize,
}

impl VertexCoverLp {
    /// Decision variables are the first `n_vertices` columns.
    pub fn decisions<'a>(&self, x: &'a [f64]) -> &'a [f64] {
        &x[..self.n_vertices]
    }
}

/// One variable per vertex in `[0,1]` plus one slack per edge:
/// `x_u + x_v - z_e = 1`.
pub fn encode_vertex_cover(g: &Graph) -> Result<VertexCoverLp> {
    let n = g.num_vertices();
    let m = g.num_edges();
    let mut triplets = Vec::with_capacity(3 * m);
    for (e, edge) in g.edges().iter().enumerate() {
        triplets.push((e, edge.u, 1.0));
        triplets.push((e, edge.v, 1.0));
        triplets.push((e, n + e, -1.0));
    }
    let matrix = SparseMatrix::from_triplets(m, n + m, &triplets)?;
    let mut cost = g.vertex_costs().to_vec();
    cost.extend(std::iter::repeat(0.0).take(m));
    let mut lp = StandardFormLp::new(matrix, vec![1.0; m], cost, Sense::Minimize)?;
    for v in 0..n {
        lp.set_bounds(v, 0.0, 1.0)?;
    }
    Ok(VertexCoverLp {
        lp,
        n_vertices: n,
        n_edges: m,
    })
}

#[derive(Debug)]
pub struct SetCoverLp {
    pub lp: StandardFormLp,
    pub n_sets: usize,
    pub n_elements: usize,
}

impl SetCoverLp {
    pub fn decisions<'a>(&self, x: &'a [f64]) -> &'a [f64] {
        &x[..self.n_sets]
    }
}

/// One variable per set in `[0,1]`, one row per element:
/// `Σ_{s : a ∈ s} x_s - z_a = 1`. Errors when some element is uncovered.
pub fn encode_set_cover(ss: &SetSystem) -> Result<SetCoverLp> {
    let n = ss.num_sets();
    let m = ss.num_elements();
    let idx = ss.element_index();
    for (a, sets) in idx.iter().enumerate() {
        if sets.is_empty() {
            return Err(Error::InfeasibleInput(format!(
                "element {a} is not covered by any set"
            )));
        }
    }
    let mut triplets = Vec::new();
    for (a, sets) in idx.iter().enumerate() {
        for &(s, _) in sets {
            triplets.push((a, s, 1.0));
        }
        triplets.push((a, n + a, -1.0));
    }
    let matrix = SparseMatrix::from_triplets(m, n + m, &triplets)?;
    let mut cost: Vec<f64> = ss.sets().iter().map(|s| s.cost).collect();
    cost.extend(std::iter::repeat(0.0).take(m));
    let mut lp = StandardFormLp::new(matrix, vec![1.0; m], cost, Sense::Minimize)?;
    for s in 0..n {
        lp.set_bounds(s, 0.0, 1.0)?;
    }
    Ok(SetCoverLp {
        lp,
        n_sets: n,
        n_elements: m,
    })
}

#[derive(Debug)]
pub struct SetPackingLp {
    pub lp: StandardFormLp,
    pub n_sets: usize,
    pub n_elements: usize,
    /// Column sparsity: max number of sets containing one element.
    pub k: usize,
    /// Number of strengthening rows kept after deduplication.
    pub strengthening_rows: usize,
    /// All packing rows (weight + strengthening) for feasibility repair.
    pub packing: PackingConstraints,
}

impl SetPackingLp {
    pub fn decisions<'a>(&self, x: &'a [f64]) -> &'a [f64] {
        &x[..self.n_sets]
    }
}

/// Strong set-packing formulation: weight rows `Σ w_{a,s} x_s <= 1` plus
/// strengthening rows `Σ_{s : a ∈ B(s)} x_s <= 1` where
/// `B(s) = {a : w_{a,s} > 1/2}`. Strengthening rows identical to their weight
/// row are dropped. Stored as a maximize LP (internally negated), ≤-rows get
/// `+1` slacks.
pub fn encode_set_packing_strong(ss: &SetSystem) -> Result<SetPackingLp> {
    let n = ss.num_sets();
    let m = ss.num_elements();
    let k = ss.max_frequency().max(1);
    let idx = ss.element_index();

    let mut pack_rows: Vec<Vec<(usize, f64)>> = Vec::new();
    for sets in idx.iter() {
        pack_rows.push(sets.iter().map(|&(s, w)| (s, w)).collect());
    }
    let mut strengthening = 0usize;
    for sets in idx.iter() {
        // a ∈ B(s) iff w_{a,s} > 1/2.
        let strong: Vec<(usize, f64)> = sets
            .iter()
            .filter(|&&(_, w)| w > 0.5)
            .map(|&(s, _)| (s, 1.0))
            .collect();
        if strong.is_empty() {
            continue;
        }
        let duplicate = strong.len() == sets.len() && sets.iter().all(|&(_, w)| w == 1.0);
        if duplicate {
            continue;
        }
        pack_rows.push(strong);
        strengthening += 1;
    }

    let rows = pack_rows.len();
    let mut triplets = Vec::new();
    for (j, row) in pack_rows.iter().enumerate() {
        for &(s, w) in row {
            triplets.push((j, s, w));
        }
        triplets.push((j, n + j, 1.0));
    }
    let matrix = SparseMatrix::from_triplets(rows, n + rows, &triplets)?;
    let mut cost: Vec<f64> = ss.sets().iter().map(|s| s.cost).collect();
    cost.extend(std::iter::repeat(0.0).take(rows));
    let mut lp = StandardFormLp::new(matrix, vec![1.0; rows], cost, Sense::Maximize)?;
    for s in 0..n {
        lp.set_bounds(s, 0.0, 1.0)?;
    }
    Ok(SetPackingLp {
        lp,
        n_sets: n,
        n_elements: m,
        k,
        strengthening_rows: strengthening,
        packing: PackingConstraints {
            num_vars: n,
            rows: pack_rows,
            caps: vec![1.0; rows],
        },
    })
}

#[derive(Debug)]
pub struct MultiwayCutLp {
    pub lp: StandardFormLp,
    pub k: usize,
    pub n_vertices: usize,
    pub n_edges: usize,
    /// Simplex blocks for the vertex variables (terminals flagged off, they
    /// are fixed via bounds) plus plain blocks for edge variables and slacks.
    pub blocks: Vec<Block>,
}

impl MultiwayCutLp {
    #[inline]
    pub fn vertex_var(&self, v: usize, i: usize) -> usize {
        v * self.k + i
    }

    #[inline]
    pub fn edge_var(&self, e: usize, i: usize) -> usize {
        self.n_vertices * self.k + e * self.k + i
    }

    /// Flattened per-vertex simplex coordinates (`v * k + i`).
    pub fn vertex_fractions(&self, x: &[f64]) -> Vec<f64> {
        x[..self.n_vertices * self.k].to_vec()
    }

    /// Uniform interior start: free vertices at the simplex barycenter,
    /// terminals at their corners, edge variables and slacks consistent.
    pub fn warm_start(&self, mi: &MultiwayInstance) -> Vec<f64> {
        let mut x = vec![0.0; self.lp.num_cols()];
        let k = self.k;
        for v in 0..self.n_vertices {
            for i in 0..k {
                x[self.vertex_var(v, i)] = 1.0 / k as f64;
            }
        }
        for (j, &t) in mi.terminals.iter().enumerate() {
            for i in 0..k {
                x[self.vertex_var(t, i)] = if i == j { 1.0 } else { 0.0 };
            }
        }
        // Edge variables at the actual simplex distance, slacks tight.
        for (e, edge) in mi.graph.edges().iter().enumerate() {
            for i in 0..k {
                let du = x[self.vertex_var(edge.u, i)];
                let dv = x[self.vertex_var(edge.v, i)];
                let gap = (du - dv).abs();
                let ev = self.edge_var(e, i);
                x[ev] = gap;
                let s_base = (self.n_vertices + self.n_edges) * k + 2 * (e * k + i);
                x[s_base] = gap - (dv - du);
                x[s_base + 1] = gap - (du - dv);
            }
        }
        x
    }
}

/// Linearized multiway-cut relaxation: per-vertex simplex blocks `x_v ∈ Δ_k`
/// (terminals fixed to corners via bounds), edge variables
/// `x_uv^i >= |x_u^i - x_v^i|` written as two ≥-rows with slacks, objective
/// `(1/2) Σ c_uv Σ_i x_uv^i`.
pub fn encode_multiway_cut(mi: &MultiwayInstance) -> Result<MultiwayCutLp> {
    let g = &mi.graph;
    let n = g.num_vertices();
    let m = g.num_edges();
    let k = mi.k();
    let vertex_vars = n * k;
    let edge_vars = m * k;
    let slack_base = vertex_vars + edge_vars;
    let total_cols = slack_base + 2 * m * k;
    let total_rows = 2 * m * k;

    let mut triplets = Vec::with_capacity(8 * m * k);
    for (e, edge) in g.edges().iter().enumerate() {
        for i in 0..k {
            let ev = vertex_vars + e * k + i;
            let uv = edge.u * k + i;
            let vv = edge.v * k + i;
            let row1 = 2 * (e * k + i);
            let row2 = row1 + 1;
            let s1 = slack_base + 2 * (e * k + i);
            let s2 = s1 + 1;
            // x_uv^i - (x_v^i - x_u^i) - s1 = 0
            triplets.push((row1, ev, 1.0));
            triplets.push((row1, vv, -1.0));
            triplets.push((row1, uv, 1.0));
            triplets.push((row1, s1, -1.0));
            // x_uv^i - (x_u^i - x_v^i) - s2 = 0
            triplets.push((row2, ev, 1.0));
            triplets.push((row2, uv, -1.0));
            triplets.push((row2, vv, 1.0));
            triplets.push((row2, s2, -1.0));
        }
    }
    let matrix = SparseMatrix::from_triplets(total_rows, total_cols, &triplets)?;
    let mut cost = vec![0.0; total_cols];
    for (e, edge) in g.edges().iter().enumerate() {
        for i in 0..k {
            cost[vertex_vars + e * k + i] = edge.cost / 2.0;
        }
    }
    let rhs = vec![0.0; total_rows];
    let mut lp = StandardFormLp::new(matrix, rhs, cost, Sense::Minimize)?;
    for j in 0..vertex_vars + edge_vars {
        lp.set_bounds(j, 0.0, 1.0)?;
    }
    let mut is_terminal = vec![None; n];
    for (j, &t) in mi.terminals.iter().enumerate() {
        is_terminal[t] = Some(j);
    }
    for v in 0..n {
        if let Some(j) = is_terminal[v] {
            for i in 0..k {
                let val = if i == j { 1.0 } else { 0.0 };
                lp.set_bounds(v * k + i, val, val)?;
            }
        }
    }

    let mut blocks = Vec::with_capacity(n + m);
    for v in 0..n {
        blocks.push(Block {
            indices: (0..k).map(|i| v * k + i).collect(),
            simplex: is_terminal[v].is_none(),
        });
    }
    for e in 0..m {
        let mut indices: Vec<usize> = (0..k).map(|i| vertex_vars + e * k + i).collect();
        indices.extend((0..2 * k).map(|t| slack_base + 2 * e * k + t));
        blocks.push(Block {
            indices,
            simplex: false,
        });
    }

    Ok(MultiwayCutLp {
        lp,
        k,
        n_vertices: n,
        n_edges: m,
        blocks,
    })
}

// ---- file loaders -----------------------------------------------------------

#[derive(Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// Original labels, indexed by the dense internal vertex id.
    pub labels: Vec<u64>,
    pub self_loops_dropped: usize,
    pub duplicates_merged: usize,
}

/// Parses whitespace-separated `u v [cost]` lines with `#` comments.
/// Vertices are relabeled densely in order of first appearance; duplicate
/// edges are merged (costs summed) and self-loops dropped with a count.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut labels: Vec<u64> = Vec::new();
    let mut label_map: HashMap<u64, usize> = HashMap::new();
    let mut raw: Vec<(usize, usize, f64)> = Vec::new();
    let mut self_loops = 0usize;
    let intern = |label: u64, labels: &mut Vec<u64>, map: &mut HashMap<u64, usize>| -> usize {
        *map.entry(label).or_insert_with(|| {
            labels.push(label);
            labels.len() - 1
        })
    };
    for (lineno, line) in text.lines().enumerate() {
        let code = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = code.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse {
            path: path.display().to_string(),
            line: lineno + 1,
            msg,
        };
        if toks.len() != 2 && toks.len() != 3 {
            return Err(err(format!("expected `u v [cost]`, got {} tokens", toks.len())));
        }
        let u: u64 = toks[0]
            .parse()
            .map_err(|_| err(format!("bad vertex `{}`", toks[0])))?;
        let v: u64 = toks[1]
            .parse()
            .map_err(|_| err(format!("bad vertex `{}`", toks[1])))?;
        let cost: f64 = if toks.len() == 3 {
            toks[2]
                .parse()
                .map_err(|_| err(format!("bad cost `{}`", toks[2])))?
        } else {
            1.0
        };
        if u == v {
            self_loops += 1;
            continue;
        }
        let ui = intern(u, &mut labels, &mut label_map);
        let vi = intern(v, &mut labels, &mut label_map);
        raw.push((ui, vi, cost));
    }
    let n = labels.len();
    let graph = Graph::new(n, &raw)?;
    let duplicates_merged = raw.len() - graph.num_edges();
    Ok(LoadedGraph {
        graph,
        labels,
        self_loops_dropped: self_loops,
        duplicates_merged,
    })
}

/// Reads terminal labels (whitespace separated, `#` comments) and maps them
/// through the loaded graph's label table.
pub fn load_terminals(path: impl AsRef<Path>, lg: &LoadedGraph) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let map: HashMap<u64, usize> = lg
        .labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i))
        .collect();
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let code = line.split('#').next().unwrap_or("");
        for tok in code.split_whitespace() {
            let label: u64 = tok.parse().map_err(|_| Error::Parse {
                path: path.display().to_string(),
                line: lineno + 1,
                msg: format!("bad terminal `{tok}`"),
            })?;
            match map.get(&label) {
                Some(&v) => out.push(v),
                None => {
                    return Err(Error::InfeasibleInput(format!(
                        "terminal {label} is not a vertex of the graph"
                    )))
                }
            }
        }
    }
    Ok(out)
}

/// Samples `k` distinct terminals from one connected component (chosen
/// seeded-random among components with at least `k` vertices).
pub fn sample_terminals(g: &Graph, k: usize, seed: u64) -> Result<Vec<usize>> {
    let comps = g.connected_components();
    let eligible: Vec<&Vec<usize>> = comps.iter().filter(|c| c.len() >= k).collect();
    if eligible.is_empty() {
        return Err(Error::InfeasibleInput(format!(
            "no connected component has {k} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let comp = eligible[rng.gen_range(0..eligible.len())];
    let mut pool = comp.clone();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let i = rng.gen_range(0..pool.len());
        out.push(pool.swap_remove(i));
    }
    out.sort_unstable();
    Ok(out)
}

// ---- synthetic instances ----------------------------------------------------

/// Seeded random integer-data covering program with a guaranteed interior
/// point (x = 2/3 has slack >= 1/4 on every row). Used by tests, benches and
/// the condition-number examples.
pub fn random_covering(n_rows: usize, n_cols: usize, seed: u64) -> (CoveringConstraints, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n_rows);
    let mut rhs = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let support = rng.gen_range(2..=n_cols.min(4));
        let mut cols: Vec<usize> = (0..n_cols).collect();
        let mut row = Vec::with_capacity(support);
        let mut sum = 0.0f64;
        for _ in 0..support {
            let c = cols.swap_remove(rng.gen_range(0..cols.len()));
            let w = if rng.gen_bool(0.3) { 2.0 } else { 1.0 };
            sum += w;
            row.push((c, w));
        }
        row.sort_by_key(|&(c, _)| c);
        let b_max = ((2.0 / 3.0) * sum - 0.25).floor().max(1.0);
        rhs.push(rng.gen_range(1..=b_max as i64) as f64);
        rows.push(row);
    }
    let costs = (0..n_cols).map(|_| rng.gen_range(1..=3) as f64).collect();
    (
        CoveringConstraints {
            num_vars: n_cols,
            rows,
            rhs,
            bound_scale: 1.0,
        },
        costs,
    )
}

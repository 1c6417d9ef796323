//! Interaction networks: torus lattice, Newman-Watts small world, and
//! Barabasi-Albert scale-free graphs.
//!
//! All generators produce simple undirected graphs over dense node ids
//! 0..n, stored in compressed sparse row form with sorted neighbour lists.
//! The random generators take an explicit seed and document their draw
//! order, so a graph is a pure function of its parameters and seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Undirected simple graph in compressed sparse row form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    offsets: Vec<u32>,
    neighbors: Vec<u32>,
}

impl Network {
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, node: u32) -> usize {
        let v = node as usize;
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    /// Sorted neighbour list of `node`.
    pub fn neighbors(&self, node: u32) -> &[u32] {
        let v = node as usize;
        &self.neighbors[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    /// Builds a graph from undirected edges, rejecting self-loops,
    /// duplicate edges in either orientation, and out-of-range endpoints.
    pub fn from_edge_list(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config {
                field: "n".into(),
                reason: "graph needs at least one node".into(),
            });
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for &(a, b) in edges {
            if a as usize >= n || b as usize >= n {
                return Err(Error::Config {
                    field: "edges".into(),
                    reason: format!("edge ({a}, {b}) is out of range for n = {n}"),
                });
            }
            if a == b {
                return Err(Error::Config {
                    field: "edges".into(),
                    reason: format!("self-loop at node {a}"),
                });
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::Config {
                    field: "edges".into(),
                    reason: format!("duplicate edge ({a}, {b})"),
                });
            }
        }
        Ok(Self::from_checked_edges(n, edges))
    }

    /// CSR assembly for edges already known to be simple and in range.
    fn from_checked_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut degrees = vec![0u32; n];
        for &(a, b) in edges {
            degrees[a as usize] += 1;
            degrees[b as usize] += 1;
        }
        let mut offsets = vec![0u32; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degrees[v];
        }
        let mut cursor: Vec<u32> = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; 2 * edges.len()];
        for &(a, b) in edges {
            neighbors[cursor[a as usize] as usize] = b;
            cursor[a as usize] += 1;
            neighbors[cursor[b as usize] as usize] = a;
            cursor[b as usize] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v] as usize..offsets[v + 1] as usize].sort_unstable();
        }
        Network { offsets, neighbors }
    }

    /// Degree histogram as (degree, node count), ascending by degree.
    pub fn degree_histogram(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for v in 0..self.node_count() {
            *counts.entry(self.degree(v as u32)).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }

    /// Breadth-first reachability from node 0.
    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::from([0u32]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == n
    }
}

/// Parameters selecting one of the three network families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NetworkSpec {
    /// side x side torus with von Neumann neighbourhoods; node id is
    /// row * side + col.
    Lattice { side: usize },
    /// Torus lattice plus one Bernoulli(p) shortcut trial per lattice edge.
    SmallWorld { side: usize, p: f64 },
    /// Preferential attachment from a complete core of `m0` nodes, adding
    /// `m` links per subsequent node.
    ScaleFree { n: usize, m0: usize, m: usize },
}

impl NetworkSpec {
    /// Short code used in scenario names and CSV output.
    pub fn code(&self) -> &'static str {
        match self {
            NetworkSpec::Lattice { .. } => "rl",
            NetworkSpec::SmallWorld { .. } => "nw",
            NetworkSpec::ScaleFree { .. } => "sf",
        }
    }

    pub fn node_count(&self) -> usize {
        match *self {
            NetworkSpec::Lattice { side } | NetworkSpec::SmallWorld { side, .. } => side * side,
            NetworkSpec::ScaleFree { n, .. } => n,
        }
    }

    /// True when construction consumes random draws.
    pub fn is_random(&self) -> bool {
        !matches!(self, NetworkSpec::Lattice { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NetworkSpec::Lattice { side } => check_side(side),
            NetworkSpec::SmallWorld { side, p } => {
                check_side(side)?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Domain {
                        name: "p",
                        value: p,
                        constraint: "0 <= p <= 1",
                    });
                }
                Ok(())
            }
            NetworkSpec::ScaleFree { n, m0, m } => {
                if m0 < 1 {
                    return Err(Error::Domain {
                        name: "m0",
                        value: m0 as f64,
                        constraint: "m0 >= 1",
                    });
                }
                if m < 1 || m > m0 {
                    return Err(Error::Domain {
                        name: "m",
                        value: m as f64,
                        constraint: "1 <= m <= m0",
                    });
                }
                if n < m0 {
                    return Err(Error::Domain {
                        name: "n",
                        value: n as f64,
                        constraint: "n >= m0",
                    });
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for NetworkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NetworkSpec::Lattice { side } => write!(f, "rl(side={side})"),
            NetworkSpec::SmallWorld { side, p } => write!(f, "nw(side={side}, p={p})"),
            NetworkSpec::ScaleFree { n, m0, m } => write!(f, "sf(n={n}, m0={m0}, m={m})"),
        }
    }
}

fn check_side(side: usize) -> Result<()> {
    if side < 3 {
        return Err(Error::Domain {
            name: "side",
            value: side as f64,
            constraint: "side >= 3",
        });
    }
    Ok(())
}

/// Lattice edges in generation order: for each node ascending, its east
/// edge then its south edge (torus wraparound).
fn lattice_edges(side: usize) -> Vec<(u32, u32)> {
    let mut edges = Vec::with_capacity(2 * side * side);
    for row in 0..side {
        for col in 0..side {
            let v = (row * side + col) as u32;
            let east = (row * side + (col + 1) % side) as u32;
            let south = (((row + 1) % side) * side + col) as u32;
            edges.push((v, east));
            edges.push((v, south));
        }
    }
    edges
}

/// side x side torus with von Neumann neighbourhoods; every node has
/// degree 4.
pub fn regular_lattice(side: usize) -> Result<Network> {
    check_side(side)?;
    Ok(Network::from_checked_edges(side * side, &lattice_edges(side)))
}

/// Newman-Watts small world: the torus lattice plus random shortcuts.
///
/// For each lattice edge in generation order, one uniform draw decides
/// whether to add a shortcut (u < p); on success, endpoint pairs are drawn
/// uniformly (two index draws per attempt) and redrawn while they collide
/// with a self-loop or an existing edge. No lattice edge is ever removed.
pub fn newman_watts<R: Rng>(side: usize, p: f64, rng: &mut R) -> Result<Network> {
    NetworkSpec::SmallWorld { side, p }.validate()?;
    let n = side * side;
    let mut edges = lattice_edges(side);
    let mut present: HashSet<(u32, u32)> =
        edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let trials = edges.len();
    for _ in 0..trials {
        if rng.random::<f64>() < p {
            loop {
                let a = rng.random_range(0..n) as u32;
                let b = rng.random_range(0..n) as u32;
                if a != b && present.insert((a.min(b), a.max(b))) {
                    edges.push((a, b));
                    break;
                }
            }
        }
    }
    Ok(Network::from_checked_edges(n, &edges))
}

/// Barabasi-Albert scale-free graph.
///
/// Starts from a complete core of `m0` nodes; each later node attaches to
/// `m` distinct existing nodes drawn proportionally to degree via a
/// repeated-targets list (one index draw per attempt, redrawing targets
/// already chosen for this node). A core of a single node has no edges, so
/// the first attachment falls back to a uniform draw over existing nodes.
pub fn barabasi_albert<R: Rng>(n: usize, m0: usize, m: usize, rng: &mut R) -> Result<Network> {
    NetworkSpec::ScaleFree { n, m0, m }.validate()?;
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(m0 * (m0 - 1) / 2 + m * (n - m0));
    let mut targets: Vec<u32> = Vec::with_capacity(2 * edges.capacity());
    for i in 0..m0 as u32 {
        for j in (i + 1)..m0 as u32 {
            edges.push((i, j));
            targets.push(i);
            targets.push(j);
        }
    }
    let mut chosen: Vec<u32> = Vec::with_capacity(m);
    for v in m0..n {
        chosen.clear();
        while chosen.len() < m {
            let t = if targets.is_empty() {
                rng.random_range(0..v) as u32
            } else {
                targets[rng.random_range(0..targets.len())]
            };
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((v as u32, t));
            targets.push(v as u32);
            targets.push(t);
        }
    }
    Ok(Network::from_checked_edges(n, &edges))
}

/// Builds the network for a spec, seeding the generator's stream cipher
/// from `seed`. Lattices ignore the seed.
pub fn build_network(spec: &NetworkSpec, seed: u64) -> Result<Network> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *spec {
        NetworkSpec::Lattice { side } => regular_lattice(side),
        NetworkSpec::SmallWorld { side, p } => newman_watts(side, p, &mut rng),
        NetworkSpec::ScaleFree { n, m0, m } => barabasi_albert(n, m0, m, &mut rng),
    }
}

/// The `k` highest-degree node ids, ordered by degree descending with ties
/// broken by ascending id.
pub fn top_k_degree_nodes(net: &Network, k: usize) -> Result<Vec<u32>> {
    let n = net.node_count();
    if k > n {
        return Err(Error::Config {
            field: "k".into(),
            reason: format!("k = {k} exceeds node count {n}"),
        });
    }
    let mut ids: Vec<u32> = (0..n as u32).collect();
    ids.sort_by(|&a, &b| net.degree(b).cmp(&net.degree(a)).then(a.cmp(&b)));
    ids.truncate(k);
    Ok(ids)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_neighbours_match_hand_layout() {
        let net = regular_lattice(3).unwrap();
        assert_eq!(net.node_count(), 9);
        assert_eq!(net.edge_count(), 18);
        assert_eq!(net.neighbors(0), &[1, 2, 3, 6]);
        assert_eq!(net.neighbors(4), &[1, 3, 5, 7]);
        assert!(net.is_connected());
        for v in 0..9 {
            assert_eq!(net.degree(v), 4);
        }
    }

    #[test]
    fn lattice_interior_neighbours_follow_the_formula() {
        let side = 5;
        let net = regular_lattice(side).unwrap();
        let v = 2 * side as u32 + 2; // row 2, col 2
        assert_eq!(net.neighbors(v), &[7, 11, 13, 17]);
        assert_eq!(net.edge_count(), 2 * side * side);
    }

    #[test]
    fn lattice_rejects_small_sides() {
        for side in [0, 1, 2] {
            assert!(regular_lattice(side).is_err());
        }
    }

    #[test]
    fn edge_list_validation_catches_defects() {
        assert!(Network::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)]).is_ok());
        assert!(Network::from_edge_list(3, &[(0, 0)]).is_err());
        assert!(Network::from_edge_list(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Network::from_edge_list(3, &[(0, 3)]).is_err());
        assert!(Network::from_edge_list(0, &[]).is_err());
    }

    #[test]
    fn small_world_at_p_zero_is_the_lattice() {
        let spec = NetworkSpec::SmallWorld { side: 6, p: 0.0 };
        let nw = build_network(&spec, 99).unwrap();
        let rl = regular_lattice(6).unwrap();
        assert_eq!(nw, rl);
    }

    #[test]
    fn small_world_at_p_one_adds_one_shortcut_per_lattice_edge() {
        let side = 5;
        let spec = NetworkSpec::SmallWorld { side, p: 1.0 };
        let net = build_network(&spec, 7).unwrap();
        assert_eq!(net.edge_count(), 4 * side * side);
        assert!((0..net.node_count()).all(|v| net.degree(v as u32) >= 4));
        assert!(net.is_connected());
    }

    #[test]
    fn small_world_shortcut_count_stays_in_range() {
        let side = 6;
        let spec = NetworkSpec::SmallWorld { side, p: 0.3 };
        let net = build_network(&spec, 11).unwrap();
        let lattice_edges = 2 * side * side;
        assert!(net.edge_count() >= lattice_edges);
        assert!(net.edge_count() <= 2 * lattice_edges);
    }

    #[test]
    fn small_world_is_deterministic_per_seed() {
        let spec = NetworkSpec::SmallWorld { side: 8, p: 0.5 };
        let a = build_network(&spec, 1234).unwrap();
        let b = build_network(&spec, 1234).unwrap();
        assert_eq!(a, b);
        let c = build_network(&spec, 1235).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn scale_free_edge_count_is_exact() {
        let spec = NetworkSpec::ScaleFree { n: 2500, m0: 3, m: 2 };
        let net = build_network(&spec, 5).unwrap();
        assert_eq!(net.node_count(), 2500);
        assert_eq!(net.edge_count(), 3 + 2 * (2500 - 3));
        assert!(net.is_connected());
        assert!((0..2500).all(|v| net.degree(v as u32) >= 2));
    }

    #[test]
    fn scale_free_accepts_core_only_graphs() {
        let spec = NetworkSpec::ScaleFree { n: 3, m0: 3, m: 2 };
        let net = build_network(&spec, 1).unwrap();
        assert_eq!(net.edge_count(), 3);
        assert!((0..3).all(|v| net.degree(v) == 2));
    }

    #[test]
    fn scale_free_single_node_core_grows_by_uniform_fallback() {
        let spec = NetworkSpec::ScaleFree { n: 50, m0: 1, m: 1 };
        let net = build_network(&spec, 3).unwrap();
        assert_eq!(net.edge_count(), 49);
        assert!(net.is_connected());
    }

    #[test]
    fn scale_free_is_deterministic_per_seed() {
        let spec = NetworkSpec::ScaleFree { n: 200, m0: 3, m: 2 };
        let a = build_network(&spec, 42).unwrap();
        let b = build_network(&spec, 42).unwrap();
        assert_eq!(a, b);
        let c = build_network(&spec, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn scale_free_rejects_bad_parameters() {
        for spec in [
            NetworkSpec::ScaleFree { n: 10, m0: 0, m: 1 },
            NetworkSpec::ScaleFree { n: 10, m0: 3, m: 0 },
            NetworkSpec::ScaleFree { n: 10, m0: 3, m: 4 },
            NetworkSpec::ScaleFree { n: 2, m0: 3, m: 2 },
        ] {
            assert!(spec.validate().is_err(), "{spec} should be invalid");
        }
    }

    #[test]
    fn top_k_orders_by_degree_then_id() {
        // Star around node 3 plus a pendant chain: degrees 1, 2, 1, 3, 1.
        let net =
            Network::from_edge_list(5, &[(3, 0), (3, 1), (3, 2), (1, 4)]).unwrap();
        assert_eq!(top_k_degree_nodes(&net, 3).unwrap(), vec![3, 1, 0]);
        assert_eq!(
            top_k_degree_nodes(&net, 5).unwrap(),
            vec![3, 1, 0, 2, 4]
        );
        assert!(top_k_degree_nodes(&net, 6).is_err());
    }

    #[test]
    fn disconnected_graphs_are_detected() {
        let net = Network::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!net.is_connected());
    }

    #[test]
    fn degree_histogram_counts_every_node() {
        let net = Network::from_edge_list(5, &[(3, 0), (3, 1), (3, 2), (1, 4)]).unwrap();
        assert_eq!(net.degree_histogram(), vec![(1, 3), (2, 1), (3, 1)]);
    }
}

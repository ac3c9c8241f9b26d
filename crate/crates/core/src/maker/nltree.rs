use std::collections::HashMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::GameError;
use crate::graphs::{rng_from_seed, Graph};
use crate::numerics::TreeParams;

/// A rooted tree embedded in a host graph. Tree vertex 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NLTree {
    pub k: usize,
    /// `N`: every leaf sits at this level.
    pub height: usize,
    pub l: usize,
    /// Host vertex of each tree vertex.
    pub vertices: Vec<usize>,
    pub parent: Vec<Option<usize>>,
    /// Host edge to the parent; `None` for the root.
    pub parent_edge: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub level: Vec<usize>,
    pub simple: bool,
}

impl NLTree {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.children[i].is_empty()
    }

    /// Non-leaf with fewer than `k` children.
    pub fn is_light(&self, i: usize) -> bool {
        !self.is_leaf(i) && self.children[i].len() < self.k
    }

    pub fn is_heavy(&self, i: usize) -> bool {
        self.children[i].len() >= self.k
    }

    pub fn light_flags(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.is_light(i)).collect()
    }

    pub fn heavy_count(&self) -> usize {
        (0..self.len()).filter(|&i| self.is_heavy(i)).count()
    }

    pub fn host_edges(&self) -> Vec<usize> {
        self.parent_edge.iter().flatten().copied().collect()
    }

    /// Vertex count of the longest descending path of light vertices.
    pub fn longest_light_path(&self) -> usize {
        let mut best = vec![0usize; self.len()];
        for i in (0..self.len()).rev() {
            if self.is_light(i) {
                best[i] = 1 + self.children[i].iter().map(|&c| best[c]).max().unwrap_or(0);
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// Maps host vertex and edge ids through the given tables, e.g. from core
    /// ids back to board ids.
    pub fn relabel(&self, vertex_map: &[usize], edge_map: &[usize]) -> NLTree {
        let mut t = self.clone();
        for v in &mut t.vertices {
            *v = vertex_map[*v];
        }
        for e in t.parent_edge.iter_mut().flatten() {
            *e = edge_map[*e];
        }
        t
    }

    /// One line per tree vertex: `index host parent level`, parent `-` for the root.
    pub fn to_parent_array(&self) -> String {
        let mut out = format!("# k={} N={} L={} simple={}\n", self.k, self.height, self.l, self.simple);
        for i in 0..self.len() {
            let p = self.parent[i].map_or("-".to_string(), |p| p.to_string());
            out.push_str(&format!("{i} {} {p} {}\n", self.vertices[i], self.level[i]));
        }
        out
    }
}

/// Checks the (N,L)-tree definition from the parent array alone, and the
/// embedding when `host` is given. Returns every problem found.
pub fn check_nl_tree(tree: &NLTree, host: Option<&Graph>) -> Vec<String> {
    let mut out = Vec::new();
    let n = tree.parent.len();
    if n == 0 {
        return vec!["empty tree".into()];
    }
    if [tree.vertices.len(), tree.parent_edge.len(), tree.children.len(), tree.level.len()]
        .iter()
        .any(|&x| x != n)
    {
        return vec!["field lengths differ".into()];
    }
    if tree.parent[0].is_some() || tree.parent[1..].iter().any(|p| p.is_none()) {
        return vec!["vertex 0 must be the only root".into()];
    }
    let mut kids = vec![Vec::new(); n];
    for (i, p) in tree.parent.iter().enumerate().skip(1) {
        let p = p.expect("checked above");
        if p >= n {
            return vec![format!("parent of {i} out of range")];
        }
        kids[p].push(i);
    }
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut stack = vec![0];
    let mut seen = 1;
    while let Some(u) = stack.pop() {
        for &c in &kids[u] {
            level[c] = level[u] + 1;
            seen += 1;
            stack.push(c);
        }
    }
    if seen != n {
        return vec!["parent array has a cycle".into()];
    }
    let k = tree.k;
    for i in 0..n {
        let mut stored = tree.children[i].clone();
        stored.sort_unstable();
        if stored != kids[i] {
            out.push(format!("children of {i} disagree with the parent array"));
        }
        if tree.level[i] != level[i] {
            out.push(format!("level of {i} is {} but should be {}", tree.level[i], level[i]));
        }
        if kids[i].is_empty() {
            if level[i] != tree.height {
                out.push(format!("leaf {i} at level {} instead of {}", level[i], tree.height));
            }
        } else if kids[i].len() + 1 < k {
            out.push(format!("vertex {i} is ({})-light with {} children", k - 1, kids[i].len()));
        }
    }
    // longest light path, counted in vertices, computed leaves-up
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(level[i]));
    let mut light_path = vec![0usize; n];
    for &i in &order {
        let light = !kids[i].is_empty() && kids[i].len() < k;
        if light {
            light_path[i] = 1 + kids[i].iter().map(|&c| light_path[c]).max().unwrap_or(0);
            if light_path[i] >= tree.l {
                out.push(format!("light path of length {} starts at {i}", light_path[i]));
            }
        }
    }
    if tree.simple {
        if kids[0].len() != k - 1 {
            out.push(format!("simple tree root has {} children", kids[0].len()));
        }
        for (i, c) in kids.iter().enumerate() {
            if c.len() > k {
                out.push(format!("heavy vertex {i} has {} children in a simple tree", c.len()));
            }
        }
    }
    if let Some(g) = host {
        let mut hosts = tree.vertices.clone();
        hosts.sort_unstable();
        hosts.dedup();
        if hosts.len() != n {
            out.push("host vertices repeat".into());
        }
        for i in 1..n {
            let p = tree.parent[i].expect("checked above");
            match tree.parent_edge[i] {
                Some(e) if e < g.m() => {
                    let (a, b) = g.edge(e);
                    let want = (tree.vertices[p], tree.vertices[i]);
                    if (a, b) != want && (b, a) != want {
                        out.push(format!("edge {e} does not join the hosts of {p} and {i}"));
                    }
                }
                _ => out.push(format!("vertex {i} has no valid host edge")),
            }
        }
    }
    out
}

/// One vertex reached by the exploration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExploredVertex {
    pub vertex: usize,
    pub parent: Option<usize>,
    pub parent_edge: Option<usize>,
    pub level: usize,
    pub children: Vec<usize>,
    /// `None` until the DFS finishes the vertex.
    pub ty: Option<usize>,
}

/// Depth-first exploration of the `2N`-ball around a start vertex with the
/// type of every finished vertex.
///
/// After the first back-edge every later type would be `L+1`, so the walk
/// stops there; vertices still open at that point are typed `L+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplorationTypeMap {
    pub start: usize,
    pub depth: usize,
    pub l: usize,
    pub nodes: Vec<ExploredVertex>,
    /// Local ids in the order their types were assigned.
    pub finish_order: Vec<usize>,
    pub back_edge_seen: bool,
}

impl ExplorationTypeMap {
    pub fn type_of(&self, i: usize) -> Option<usize> {
        self.nodes[i].ty
    }

    /// Level-`N` vertices typed below `L`, in finishing order.
    pub fn candidates(&self, height: usize) -> Vec<usize> {
        self.finish_order
            .iter()
            .copied()
            .filter(|&i| self.nodes[i].level == height && self.nodes[i].ty.is_some_and(|t| t < self.l))
            .collect()
    }
}

fn check_start(core: &Graph, k: usize, start: usize) -> Result<(), GameError> {
    if k < 2 {
        return Err(GameError::Domain(format!("k = {k} must be at least 2")));
    }
    if start >= core.n() || core.degree(start) < k {
        return Err(GameError::Domain(format!("start vertex {start} is not in the {k}-core")));
    }
    Ok(())
}

/// Runs the typed DFS from `start` to depth `2N`. Neighbour order is a
/// seeded shuffle, so `(core, start, seed)` determines the result.
pub fn explore_types(
    core: &Graph,
    k: usize,
    params: &TreeParams,
    start: usize,
    seed: u64,
) -> Result<ExplorationTypeMap, GameError> {
    check_start(core, k, start)?;
    let depth = 2 * params.height;
    let l = params.l;
    let mut rng = rng_from_seed(seed);
    let mut local: HashMap<usize, usize> = HashMap::new();
    let mut nodes = vec![ExploredVertex {
        vertex: start,
        parent: None,
        parent_edge: None,
        level: 0,
        children: Vec::new(),
        ty: None,
    }];
    local.insert(start, 0);
    let mut finish_order = Vec::new();
    let mut back_edge_seen = false;

    let shuffled = |v: usize, rng: &mut rand_chacha::ChaCha8Rng| {
        let mut inc = core.incident(v).to_vec();
        inc.shuffle(rng);
        inc
    };
    let first = if depth == 0 { Vec::new() } else { shuffled(start, &mut rng) };
    // (local id, shuffled incident edges, next position)
    let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(0, first, 0)];
    while let Some(top) = stack.last_mut() {
        let u = top.0;
        let next = top.1.get(top.2).copied();
        top.2 += 1;
        let Some(e) = next else {
            stack.pop();
            let ty = assign_type(&nodes, u, core, k, params, depth);
            nodes[u].ty = Some(ty);
            finish_order.push(u);
            continue;
        };
        if Some(e) == nodes[u].parent_edge {
            continue;
        }
        let w = core.other(e, nodes[u].vertex);
        if local.contains_key(&w) {
            back_edge_seen = true;
            break;
        }
        let id = nodes.len();
        let level = nodes[u].level + 1;
        local.insert(w, id);
        nodes.push(ExploredVertex {
            vertex: w,
            parent: Some(u),
            parent_edge: Some(e),
            level,
            children: Vec::new(),
            ty: None,
        });
        nodes[u].children.push(id);
        let inc = if level < depth { shuffled(w, &mut rng) } else { Vec::new() };
        stack.push((id, inc, 0));
    }
    for (u, _, _) in stack.into_iter().rev() {
        nodes[u].ty = Some(l + 1);
        finish_order.push(u);
    }
    Ok(ExplorationTypeMap { start, depth, l, nodes, finish_order, back_edge_seen })
}

fn assign_type(nodes: &[ExploredVertex], u: usize, core: &Graph, k: usize, params: &TreeParams, depth: usize) -> usize {
    let l = params.l;
    let node = &nodes[u];
    if node.level == depth {
        return 0;
    }
    let s: Vec<usize> = node
        .children
        .iter()
        .map(|&c| nodes[c].ty.expect("children finish first"))
        .filter(|&t| t < l)
        .collect();
    let d = core.degree(node.vertex);
    if d > params.d0 || s.len() + 1 < k {
        l
    } else if s.len() >= k {
        0
    } else {
        (1 + s.iter().copied().max().unwrap_or(0)).min(l)
    }
}

/// Builds `T*(v)` for a candidate `v` and reduces it to a simple tree: a
/// heavy root keeps its `k-1` children of smallest type, other heavy
/// vertices keep their `k` lowest-id children. `None` if the trimmed root
/// would start a light path of length `L`.
fn simple_tree_at(map: &ExplorationTypeMap, v: usize, k: usize, height: usize) -> Option<NLTree> {
    let nodes = &map.nodes;
    let ty = |i: usize| nodes[i].ty.expect("subtree of a typed vertex is typed");
    let kept = |i: usize| -> Vec<usize> {
        let mut s: Vec<usize> = nodes[i].children.iter().copied().filter(|&c| ty(c) < map.l).collect();
        s.sort_by_key(|&c| nodes[c].vertex);
        s
    };
    let mut root_kids = kept(v);
    if root_kids.len() >= k {
        root_kids.sort_by_key(|&c| (ty(c), nodes[c].vertex));
        root_kids.truncate(k - 1);
        root_kids.sort_by_key(|&c| nodes[c].vertex);
    }
    let root_path = 1 + root_kids.iter().map(|&c| ty(c)).max().unwrap_or(0);
    if root_path >= map.l {
        return None;
    }
    let base = nodes[v].level;
    let mut tree = NLTree {
        k,
        height,
        l: map.l,
        vertices: vec![nodes[v].vertex],
        parent: vec![None],
        parent_edge: vec![None],
        children: vec![Vec::new()],
        level: vec![0],
        simple: true,
    };
    // breadth-first so indices grow with level
    let mut queue = std::collections::VecDeque::new();
    queue.push_back((0usize, root_kids));
    while let Some((tx, kids)) = queue.pop_front() {
        for c in kids {
            let id = tree.vertices.len();
            tree.vertices.push(nodes[c].vertex);
            tree.parent.push(Some(tx));
            tree.parent_edge.push(nodes[c].parent_edge);
            tree.children.push(Vec::new());
            tree.level.push(nodes[c].level - base);
            tree.children[tx].push(id);
            let mut next = kept(c);
            next.truncate(k);
            queue.push_back((id, next));
        }
    }
    Some(tree)
}

/// Explores from `start` and returns a simple (N,L)-tree of the core rooted
/// at a level-`N` vertex of type below `L`, or `None` if there is none.
pub fn find_nl_tree(
    core: &Graph,
    k: usize,
    params: &TreeParams,
    start: usize,
    seed: u64,
) -> Result<Option<NLTree>, GameError> {
    let map = explore_types(core, k, params, start, seed)?;
    for v in map.candidates(params.height) {
        if let Some(tree) = simple_tree_at(&map, v, k, params.height) {
            let problems = check_nl_tree(&tree, Some(core));
            if problems.is_empty() {
                return Ok(Some(tree));
            }
            return Err(GameError::Domain(format!("finder produced an invalid tree: {}", problems.join("; "))));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinderRun {
    pub tree: Option<NLTree>,
    /// Start vertices tried, up to and including the successful one.
    pub attempts: usize,
    pub start: Option<usize>,
}

/// Tries up to `restarts` start vertices drawn by a seeded shuffle of the
/// core; attempt `i` explores with seed `seed + i`. Attempts run in
/// parallel and the lowest successful index wins.
pub fn find_nl_tree_with_restarts(
    core: &Graph,
    k: usize,
    params: &TreeParams,
    seed: u64,
    restarts: usize,
) -> Result<FinderRun, GameError> {
    let mut starts: Vec<usize> = (0..core.n()).filter(|&v| core.degree(v) >= k).collect();
    starts.shuffle(&mut rng_from_seed(seed));
    starts.truncate(restarts);
    let found = starts
        .par_iter()
        .enumerate()
        .map(|(i, &s)| find_nl_tree(core, k, params, s, seed.wrapping_add(i as u64)).map(|t| t.map(|t| (i, s, t))))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .min_by_key(|(i, _, _)| *i);
    Ok(match found {
        Some((i, s, tree)) => FinderRun { tree: Some(tree), attempts: i + 1, start: Some(s) },
        None => FinderRun { tree: None, attempts: starts.len(), start: None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Complete tree where the root has `root_kids` children and every other
    /// internal vertex `kids`, down to level `depth`.
    pub(crate) fn regular_tree(root_kids: usize, kids: usize, depth: usize) -> Graph {
        let mut edges = Vec::new();
        let mut frontier = vec![0usize];
        let mut next_id = 1;
        for lvl in 0..depth {
            let mut next = Vec::new();
            for &u in &frontier {
                let c = if lvl == 0 { root_kids } else { kids };
                for _ in 0..c {
                    edges.push((u, next_id));
                    next.push(next_id);
                    next_id += 1;
                }
            }
            frontier = next;
        }
        Graph::new(next_id, edges).unwrap()
    }

    #[test]
    fn heavy_host_types_are_zero() {
        // k = 3: the root has 3 children, every internal vertex 3 children and degree 4
        let g = regular_tree(3, 3, 5);
        let params = TreeParams { height: 2, l: 3, d0: 4 };
        let map = explore_types(&g, 3, &params, 0, 1).unwrap();
        assert!(!map.back_edge_seen);
        for node in &map.nodes {
            assert_eq!(node.ty, Some(0));
            assert!(node.level <= 4);
        }
        let tree = find_nl_tree(&g, 3, &params, 0, 1).unwrap().unwrap();
        assert!(check_nl_tree(&tree, Some(&g)).is_empty());
        // heavy root trimmed to 2 children, each with 3
        assert_eq!(tree.children[0].len(), 2);
        assert_eq!(tree.len(), 1 + 2 + 6);
        assert_eq!(tree.heavy_count(), 2);
    }

    #[test]
    fn all_light_host_fails_once_paths_are_long() {
        // every non-root vertex has degree 3 = k, so all are light
        let g = regular_tree(3, 2, 9);
        let short = TreeParams { height: 4, l: 4, d0: 10 };
        assert_eq!(find_nl_tree(&g, 3, &short, 0, 7).unwrap(), None);
        let map = explore_types(&g, 3, &short, 0, 7).unwrap();
        for node in &map.nodes {
            if node.level < 8 {
                assert_eq!(node.ty, Some((8 - node.level).min(4)));
            }
        }
        let long = TreeParams { height: 4, l: 5, d0: 10 };
        let tree = find_nl_tree(&g, 3, &long, 0, 7).unwrap().unwrap();
        assert_eq!(tree.longest_light_path(), 4);
        assert!(check_nl_tree(&tree, Some(&g)).is_empty());
    }

    #[test]
    fn degree_cap_types_l() {
        let g = regular_tree(3, 3, 5);
        let params = TreeParams { height: 2, l: 3, d0: 3 };
        // every non-root internal vertex has degree 4 > d0
        assert_eq!(find_nl_tree(&g, 3, &params, 0, 1).unwrap(), None);
    }

    #[test]
    fn back_edge_stops_typing() {
        let g = Graph::complete(5);
        let params = TreeParams { height: 2, l: 3, d0: 10 };
        let map = explore_types(&g, 3, &params, 0, 3).unwrap();
        assert!(map.back_edge_seen);
        for node in map.nodes.iter().filter(|n| n.level < map.depth) {
            assert_eq!(node.ty, Some(params.l + 1));
        }
        assert_eq!(find_nl_tree(&g, 3, &params, 0, 3).unwrap(), None);
    }

    #[test]
    fn start_outside_core_is_an_error() {
        let g = Graph::path(4);
        let params = TreeParams { height: 1, l: 2, d0: 5 };
        assert!(matches!(explore_types(&g, 3, &params, 0, 0), Err(GameError::Domain(_))));
        assert!(matches!(explore_types(&g, 3, &params, 9, 0), Err(GameError::Domain(_))));
    }

    #[test]
    fn checker_rejects_broken_trees() {
        let g = regular_tree(3, 3, 5);
        let params = TreeParams { height: 2, l: 3, d0: 4 };
        let good = find_nl_tree(&g, 3, &params, 0, 1).unwrap().unwrap();

        let mut unbalanced = good.clone();
        unbalanced.height = 3;
        assert!(!check_nl_tree(&unbalanced, None).is_empty());

        let mut bad_edge = good.clone();
        bad_edge.parent_edge[1] = Some(g.m() - 1);
        assert!(check_nl_tree(&bad_edge, None).is_empty());
        assert!(!check_nl_tree(&bad_edge, Some(&g)).is_empty());

        let mut long_light = good;
        long_light.l = 1;
        assert!(!check_nl_tree(&long_light, None).is_empty());
    }
}

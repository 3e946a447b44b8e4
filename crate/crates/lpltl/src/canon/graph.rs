//! The next-step relation over atoms, seriality pruning, and acceptable
//! lasso search through self-fulfilling strongly connected subgraphs.

use std::collections::VecDeque;

use super::atoms::{Atom, ClosureInfo};

/// Atoms with the next-step relation, pruned to a serial subgraph.
#[derive(Debug)]
pub struct AtomGraph {
    pub atoms: Vec<Atom>,
    /// Successor lists, indexed by position in `atoms`.
    pub next: Vec<Vec<usize>>,
    /// Atoms deleted by seriality pruning.
    pub pruned: usize,
}

/// Builds the next-step relation and prunes to seriality.
///
/// An edge from `G` to `D` requires, for every `X a` in the closure, that
/// `X a` holds in `G` exactly when `a` holds in `D`, and it propagates until
/// obligations: an unfulfilled `a U b` in `G` must persist into `D`, and a
/// refuted `a U b` with `a` holding now must stay refuted in `D`. Atoms left
/// without successors are deleted until the relation is serial on the rest.
pub fn build_next(info: &ClosureInfo, atoms: Vec<Atom>) -> AtomGraph {
    let n = atoms.len();
    let edge = |from: &Atom, to: &Atom| -> bool {
        for &(x_idx, arg_idx) in &info.next_members {
            if from.contains(x_idx) != to.contains(arg_idx) {
                return false;
            }
        }
        for &(u_idx, a_idx, b_idx) in &info.until_members {
            if from.contains(u_idx) && !from.contains(b_idx) && !to.contains(u_idx) {
                return false;
            }
            if !from.contains(u_idx) && from.contains(a_idx) && to.contains(u_idx) {
                return false;
            }
        }
        true
    };
    let mut next: Vec<Vec<usize>> = (0..n)
        .map(|v| (0..n).filter(|&w| edge(&atoms[v], &atoms[w])).collect())
        .collect();

    // seriality: drop atoms with no successor, iterate to a fixpoint
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            if alive[v] && !next[v].iter().any(|&w| alive[w]) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut remap = vec![usize::MAX; n];
    let mut kept = Vec::new();
    for v in 0..n {
        if alive[v] {
            remap[v] = kept.len();
            kept.push(atoms[v].clone());
        }
    }
    let next = (0..n)
        .filter(|&v| alive[v])
        .map(|v| {
            next[v]
                .drain(..)
                .filter(|&w| alive[w])
                .map(|w| remap[w])
                .collect()
        })
        .collect();
    let pruned = n - kept.len();
    AtomGraph {
        atoms: kept,
        next,
        pruned,
    }
}

impl AtomGraph {
    pub fn is_serial(&self) -> bool {
        self.next.iter().all(|succ| !succ.is_empty())
    }

    fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.atoms.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &self.next[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Tarjan's strongly connected components, returned in a deterministic
    /// order (sorted by smallest member).
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let n = self.atoms.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut counter = 0usize;
        let mut out: Vec<Vec<usize>> = Vec::new();

        // iterative Tarjan: (node, next child position)
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            while let Some(&mut (v, ref mut child)) = call.last_mut() {
                if *child == 0 {
                    index[v] = counter;
                    low[v] = counter;
                    counter += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if *child < self.next[v].len() {
                    let w = self.next[v][*child];
                    *child += 1;
                    if index[w] == usize::MAX {
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    if low[v] == index[v] {
                        let mut component = Vec::new();
                        while let Some(w) = stack.pop() {
                            on_stack[w] = false;
                            component.push(w);
                            if w == v {
                                break;
                            }
                        }
                        component.sort_unstable();
                        out.push(component);
                    }
                    call.pop();
                    if let Some(&mut (parent, _)) = call.last_mut() {
                        low[parent] = low[parent].min(low[v]);
                    }
                }
            }
        }
        out.sort_by_key(|c| c[0]);
        out
    }

    fn has_internal_edge(&self, component: &[usize]) -> bool {
        component.len() > 1 || self.next[component[0]].contains(&component[0])
    }

    /// A component is self-fulfilling when every until obligation asserted in
    /// any of its atoms has a fulfilling atom inside the component. Because
    /// edges propagate unfulfilled obligations and the unfolding keeps the
    /// left argument alive, a closed walk through the whole component then
    /// fulfills every obligation along it.
    fn is_self_fulfilling(&self, info: &ClosureInfo, component: &[usize]) -> bool {
        for &(u_idx, _, b_idx) in &info.until_members {
            let asserted = component.iter().any(|&v| self.atoms[v].contains(u_idx));
            if asserted && !component.iter().any(|&v| self.atoms[v].contains(b_idx)) {
                return false;
            }
        }
        true
    }

    fn shortest_path(
        &self,
        from: usize,
        to: usize,
        allowed: Option<&[usize]>,
    ) -> Option<Vec<usize>> {
        let ok = |v: usize| allowed.is_none_or(|set| set.contains(&v));
        let mut prev = vec![usize::MAX; self.atoms.len()];
        let mut seen = vec![false; self.atoms.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &self.next[v] {
                if !ok(w) || seen[w] {
                    continue;
                }
                seen[w] = true;
                prev[w] = v;
                if w == to {
                    let mut path = vec![to];
                    let mut cur = to;
                    while cur != from {
                        cur = prev[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        if from == to {
            // a non-trivial cycle back to `from` was not found above only if
            // no successor reaches it
            return None;
        }
        None
    }

    /// One prefix-free lasso per self-fulfilling component of the whole
    /// graph, in deterministic order.
    pub fn fulfilling_loops(
        &self,
        info: &ClosureInfo,
        cap: usize,
    ) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut out = Vec::new();
        for component in self.sccs() {
            if out.len() >= cap {
                break;
            }
            if self.has_internal_edge(&component) && self.is_self_fulfilling(info, &component) {
                let entry = component[0];
                out.push((Vec::new(), self.component_loop(info, &component, entry)));
            }
        }
        out
    }

    /// The shortest closed walk through `entry` inside the component:
    /// `[entry, ..., last]` with consecutive edges and an edge back from
    /// `last` to `entry`.
    fn shortest_cycle(&self, component: &[usize], entry: usize) -> Vec<usize> {
        if self.next[entry].contains(&entry) {
            return vec![entry];
        }
        let mut best: Option<Vec<usize>> = None;
        for &succ in &self.next[entry] {
            if !component.contains(&succ) {
                continue;
            }
            if let Some(back) = self.shortest_path(succ, entry, Some(component)) {
                // cycle nodes: entry, succ, ..., node before re-entering
                let mut cycle = vec![entry];
                cycle.extend_from_slice(&back[..back.len() - 1]);
                let better = best.as_ref().is_none_or(|b| cycle.len() < b.len());
                if better {
                    best = Some(cycle);
                }
            }
        }
        best.expect("component has an internal edge")
    }

    /// A closed walk from `entry` whose atoms fulfill every until obligation
    /// they assert. Starts from the shortest cycle through `entry` and keeps
    /// extending with detours to fulfilling atoms; unfulfilled obligations
    /// propagate along edges, so fulfillment only needs the right-argument
    /// atom to appear somewhere on the walk.
    fn component_loop(&self, info: &ClosureInfo, component: &[usize], entry: usize) -> Vec<usize> {
        let mut walk = self.shortest_cycle(component, entry);
        loop {
            let mut missing = None;
            for &(u_idx, _, b_idx) in &info.until_members {
                let asserted = walk.iter().any(|&v| self.atoms[v].contains(u_idx));
                let fulfilled = walk.iter().any(|&v| self.atoms[v].contains(b_idx));
                if asserted && !fulfilled {
                    missing = Some(b_idx);
                    break;
                }
            }
            let Some(b_idx) = missing else {
                return walk;
            };
            let target = component
                .iter()
                .copied()
                .find(|&v| self.atoms[v].contains(b_idx))
                .expect("component is self-fulfilling");
            // detour: last -> target -> entry replaces the closing edge;
            // target is never on the walk here, so the path is non-trivial
            let last = *walk.last().unwrap();
            let reach =
                self.shortest_path(last, target, Some(component)).expect("strongly connected");
            walk.extend_from_slice(&reach[1..]);
            let back = self
                .shortest_path(target, entry, Some(component))
                .expect("strongly connected");
            walk.extend_from_slice(&back[1..back.len() - 1]);
        }
    }
}

/// All acceptable lassos from `start`: one per reachable self-fulfilling
/// strongly connected subgraph, in deterministic order, capped.
pub fn find_acceptable_lassos(
    graph: &AtomGraph,
    info: &ClosureInfo,
    start: usize,
    cap: usize,
) -> Vec<(Vec<usize>, Vec<usize>)> {
    let reachable = graph.reachable_from(start);
    let mut out = Vec::new();
    for component in graph.sccs() {
        if out.len() >= cap {
            break;
        }
        if !reachable[component[0]]
            || !graph.has_internal_edge(&component)
            || !graph.is_self_fulfilling(info, &component)
        {
            continue;
        }
        // entry: first component node on a shortest path from start
        let (prefix, entry) = if component.contains(&start) {
            (Vec::new(), start)
        } else {
            let mut best: Option<Vec<usize>> = None;
            for &candidate in &component {
                if let Some(path) = graph.shortest_path(start, candidate, None) {
                    let better = match &best {
                        Some(current) => {
                            path.len() < current.len()
                                || (path.len() == current.len() && path.last() < current.last())
                        }
                        None => true,
                    };
                    if better {
                        best = Some(path);
                    }
                }
            }
            let Some(mut path) = best else { continue };
            let entry = path.pop().expect("path is non-empty");
            (path, entry)
        };
        let looping = graph.component_loop(info, &component, entry);
        out.push((prefix, looping));
    }
    out
}

/// Test support: checks the acceptability conditions directly on an atom
/// lasso — consecutive edges, the wrap edge, and fulfillment of every until
/// obligation along the path.
pub fn lasso_is_acceptable(
    graph: &AtomGraph,
    info: &ClosureInfo,
    prefix: &[usize],
    looping: &[usize],
) -> bool {
    let sequence: Vec<usize> = prefix.iter().chain(looping.iter()).copied().collect();
    let len = sequence.len();
    let at = |n: usize| {
        if n < len {
            sequence[n]
        } else {
            looping[(n - prefix.len()) % looping.len()]
        }
    };
    for n in 0..len {
        let here = at(n);
        let there = at(n + 1);
        if !graph.next[here].contains(&there) {
            return false;
        }
    }
    for n in 0..len {
        for &(u_idx, a_idx, b_idx) in &info.until_members {
            if !graph.atoms[at(n)].contains(u_idx) {
                continue;
            }
            // look for fulfillment within one extra period
            let mut fulfilled = false;
            for m in n..n + 2 * len {
                if graph.atoms[at(m)].contains(b_idx) {
                    fulfilled = true;
                    break;
                }
                if !graph.atoms[at(m)].contains(a_idx) {
                    return false;
                }
            }
            if !fulfilled {
                return false;
            }
        }
    }
    true
}

//! Small graph helpers shared by the automata and game code.

use std::collections::VecDeque;

/// Strongly connected components (Tarjan, iterative). Components come out in
/// reverse topological order; `comp[v]` is the component index of `v`.
pub fn sccs(n: usize, succ: &[Vec<u32>]) -> (Vec<Vec<u32>>, Vec<u32>) {
    const UNSET: u32 = u32::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut comps: Vec<Vec<u32>> = Vec::new();
    let mut comp = vec![UNSET; n];
    let mut counter = 0u32;
    let mut call: Vec<(u32, usize)> = Vec::new();
    for root in 0..n as u32 {
        if index[root as usize] != UNSET {
            continue;
        }
        call.push((root, 0));
        index[root as usize] = counter;
        low[root as usize] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            let vs = v as usize;
            if *i < succ[vs].len() {
                let w = succ[vs][*i];
                *i += 1;
                let ws = w as usize;
                if index[ws] == UNSET {
                    index[ws] = counter;
                    low[ws] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[ws] = true;
                    call.push((w, 0));
                } else if on_stack[ws] {
                    low[vs] = low[vs].min(index[ws]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p as usize] = low[p as usize].min(low[vs]);
                }
                if low[vs] == index[vs] {
                    let id = comps.len() as u32;
                    let mut c = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w as usize] = false;
                        comp[w as usize] = id;
                        c.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(c);
                }
            }
        }
    }
    (comps, comp)
}

/// States reachable from `start`.
pub fn reachable(n: usize, succ: &[Vec<u32>], start: &[u32]) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue: VecDeque<u32> = VecDeque::new();
    for &s in start {
        if !seen[s as usize] {
            seen[s as usize] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &succ[v as usize] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// States that can reach some state in `targets`.
pub fn coreachable(n: usize, succ: &[Vec<u32>], targets: &[bool]) -> Vec<bool> {
    let mut pred = vec![Vec::new(); n];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w as usize].push(v as u32);
        }
    }
    let start: Vec<u32> = (0..n as u32).filter(|&v| targets[v as usize]).collect();
    reachable(n, &pred, &start)
}

/// Shortest path from any of `from` to a state satisfying `goal`, moving
/// only through states allowed by `inside`.
pub fn bfs_path(
    succ: &[Vec<u32>],
    from: &[u32],
    inside: impl Fn(u32) -> bool,
    goal: impl Fn(u32) -> bool,
) -> Option<Vec<u32>> {
    let n = succ.len();
    let mut parent = vec![u32::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in from {
        if inside(s) && !seen[s as usize] {
            seen[s as usize] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        if goal(v) {
            let mut path = vec![v];
            let mut cur = v;
            while parent[cur as usize] != u32::MAX {
                cur = parent[cur as usize];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in &succ[v as usize] {
            if inside(w) && !seen[w as usize] {
                seen[w as usize] = true;
                parent[w as usize] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

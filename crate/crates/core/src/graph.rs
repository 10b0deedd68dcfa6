//! Biconnected components and articulation points of small undirected
//! graphs (Hopcroft–Tarjan, iterative). Used to split the Buneman graph and
//! the oracle's 1-skeleton into blocks.

/// Result of the block decomposition of an undirected graph given as an
/// edge list over vertices `0..n`.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    /// Edge indices grouped into biconnected components (blocks). A bridge
    /// forms its own singleton block.
    pub blocks: Vec<Vec<usize>>,
    /// Vertices whose removal disconnects the graph.
    pub cut_vertices: Vec<usize>,
}

pub fn block_decomposition(n: usize, edges: &[(usize, usize)]) -> BlockDecomposition {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (neighbor, edge id)
    for (id, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, id));
        adj[v].push((u, id));
    }

    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_cut = vec![false; n];
    let mut timer = 0usize;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();

    // Iterative DFS frames: (vertex, edge id into this vertex, next adj index).
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, usize::MAX, 0));
        let mut root_children = 0usize;
        while let Some(frame) = stack.last_mut() {
            let (v, parent_edge) = (frame.0, frame.1);
            if frame.2 < adj[v].len() {
                let (w, eid) = adj[v][frame.2];
                frame.2 += 1;
                if eid == parent_edge {
                    continue;
                }
                if disc[w] == usize::MAX {
                    if v == root {
                        root_children += 1;
                    }
                    edge_stack.push(eid);
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, eid, 0));
                } else if disc[w] < disc[v] {
                    // Back edge to an ancestor.
                    edge_stack.push(eid);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(up) = stack.last_mut() {
                    let u = up.0;
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        // u cuts off v's subtree: everything pushed since the
                        // tree edge (u, v) forms one block.
                        let mut block = Vec::new();
                        loop {
                            let eid = edge_stack.pop().expect("tree edge on stack");
                            block.push(eid);
                            if eid == parent_edge {
                                break;
                            }
                        }
                        blocks.push(block);
                        if u != root || root_children > 1 {
                            is_cut[u] = true;
                        }
                    }
                }
            }
        }
    }

    let cut_vertices = (0..n).filter(|&v| is_cut[v]).collect();
    BlockDecomposition {
        blocks,
        cut_vertices,
    }
}

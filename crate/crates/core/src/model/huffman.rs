//! Huffman coding trees for hierarchical softmax.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Binary code and internal-node path of every leaf. Internal nodes are
/// numbered `0..len()-1` in creation order, so the root is the last one.
/// Codes and paths run from the root down to the leaf.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HuffmanTree {
    codes: Vec<Vec<bool>>,
    points: Vec<Vec<u32>>,
}

impl HuffmanTree {
    pub fn leaves(&self) -> usize {
        self.codes.len()
    }

    pub fn internal_nodes(&self) -> usize {
        self.codes.len().saturating_sub(1)
    }

    pub fn code(&self, leaf: u32) -> &[bool] {
        &self.codes[leaf as usize]
    }

    pub fn path(&self, leaf: u32) -> &[u32] {
        &self.points[leaf as usize]
    }
}

/// Build the tree from leaf counts. The two lightest nodes are merged first,
/// ties going to the smaller `(count, index)` pair where leaves are indexed
/// `0..n` and merged nodes `n..`. The lighter child gets bit `0`.
pub fn build_huffman(counts: &[u64]) -> HuffmanTree {
    let n = counts.len();
    if n == 0 {
        return HuffmanTree::default();
    }
    let total = 2 * n - 1;
    let mut parent = vec![0usize; total];
    let mut bit = vec![false; total];
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> =
        counts.iter().enumerate().map(|(i, &c)| Reverse((c, i))).collect();
    for node in n..total {
        let Reverse((c0, a)) = heap.pop().expect("heap holds at least two nodes");
        let Reverse((c1, b)) = heap.pop().expect("heap holds at least two nodes");
        parent[a] = node;
        parent[b] = node;
        bit[b] = true;
        heap.push(Reverse((c0 + c1, node)));
    }

    let root = total - 1;
    let mut codes = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    for leaf in 0..n {
        let mut code = Vec::new();
        let mut path = Vec::new();
        let mut node = leaf;
        while node != root {
            code.push(bit[node]);
            node = parent[node];
            path.push((node - n) as u32);
        }
        code.reverse();
        path.reverse();
        codes.push(code);
        points.push(path);
    }
    HuffmanTree { codes, points }
}

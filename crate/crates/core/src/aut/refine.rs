//! Ordered partitions and equitable refinement.
//!
//! Cells are contiguous ranges of `lab` and are named by their start
//! position. Every decision made during refinement depends only on positions
//! and neighbour counts, never on vertex labels, so refining `γ(π)` yields
//! `γ(refine(π))` for any relabelling `γ`. The trace hash records the same
//! position-only data and is therefore an isomorphism invariant of a search
//! node.

use std::collections::VecDeque;

/// Compressed adjacency over dense indices `0..n`; neighbour lists sorted.
#[derive(Debug, Clone)]
pub struct DenseGraph {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl DenseGraph {
    pub fn from_adjacency(adj: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut nbrs in adj {
            nbrs.sort_unstable();
            targets.extend(nbrs);
            offsets.push(targets.len() as u32);
        }
        DenseGraph { offsets, targets }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.targets[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    #[inline]
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    // splitmix-style combiner; only needs to be deterministic
    let mut z = h ^ x
        .wrapping_add(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(h << 6)
        .wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct Partition {
    pub lab: Vec<u32>,
    pos: Vec<u32>,
    /// start of the cell containing each vertex
    cell_of: Vec<u32>,
    /// end (exclusive) of the cell, indexed by its start
    cell_end: Vec<u32>,
    cells: usize,
}

/// Scratch buffers reused across refinements.
#[derive(Debug, Default)]
pub struct Workspace {
    count: Vec<u32>,
    touched: Vec<u32>,
    touched_cells: Vec<u32>,
    in_queue: Vec<bool>,
    members: Vec<u32>,
}

impl Workspace {
    pub fn new(n: usize) -> Self {
        Workspace {
            count: vec![0; n],
            touched: Vec::new(),
            touched_cells: Vec::new(),
            in_queue: vec![false; n],
            members: Vec::new(),
        }
    }
}

impl Partition {
    /// Partition whose cells are the colour classes of `colors`, ordered by
    /// colour value.
    pub fn from_colors(colors: &[u32]) -> Self {
        let n = colors.len();
        let mut lab: Vec<u32> = (0..n as u32).collect();
        lab.sort_by_key(|&v| (colors[v as usize], v));
        let mut pos = vec![0; n];
        let mut cell_of = vec![0; n];
        let mut cell_end = vec![0; n];
        let mut cells = 0;
        let mut start = 0;
        while start < n {
            let c = colors[lab[start] as usize];
            let mut end = start;
            while end < n && colors[lab[end] as usize] == c {
                end += 1;
            }
            for i in start..end {
                pos[lab[i] as usize] = i as u32;
                cell_of[lab[i] as usize] = start as u32;
            }
            cell_end[start] = end as u32;
            cells += 1;
            start = end;
        }
        Partition {
            lab,
            pos,
            cell_of,
            cell_end,
            cells,
        }
    }

    pub fn len(&self) -> usize {
        self.lab.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells
    }

    pub fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    /// Starts of all cells, in order.
    pub fn cell_starts(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.cells);
        let mut s = 0;
        while s < self.lab.len() {
            out.push(s as u32);
            s = self.cell_end[s] as usize;
        }
        out
    }

    pub fn cell(&self, start: u32) -> &[u32] {
        &self.lab[start as usize..self.cell_end[start as usize] as usize]
    }

    /// The first smallest non-singleton cell.
    pub fn target_cell(&self) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        let mut s = 0;
        while s < self.lab.len() {
            let e = self.cell_end[s];
            let size = e - s as u32;
            if size > 1 && best.is_none_or(|(_, b)| size < b) {
                best = Some((s as u32, size));
                if size == 2 {
                    break;
                }
            }
            s = e as usize;
        }
        best.map(|(s, _)| s)
    }

    /// Splits `{v}` off the front of its cell; returns the singleton's start.
    pub fn individualize(&mut self, v: u32) -> u32 {
        let s = self.cell_of[v as usize];
        let e = self.cell_end[s as usize];
        if e - s == 1 {
            return s;
        }
        let p = self.pos[v as usize];
        let other = self.lab[s as usize];
        self.lab.swap(s as usize, p as usize);
        self.pos[other as usize] = p;
        self.pos[v as usize] = s;
        self.cell_end[s as usize] = s + 1;
        self.cell_end[s as usize + 1] = e;
        for i in s + 1..e {
            let w = self.lab[i as usize];
            self.cell_of[w as usize] = s + 1;
        }
        self.cells += 1;
        s
    }

    /// Refines to the coarsest equitable partition finer than `self`, starting
    /// from the splitter cells in `initial`. Returns the trace hash.
    pub fn refine(&mut self, g: &DenseGraph, initial: &[u32], ws: &mut Workspace) -> u64 {
        let mut trace: u64 = 0x5eed;
        let mut queue: VecDeque<u32> = VecDeque::with_capacity(initial.len());
        for &s in initial {
            if !ws.in_queue[s as usize] {
                ws.in_queue[s as usize] = true;
                queue.push_back(s);
            }
        }
        while let Some(splitter) = queue.pop_front() {
            ws.in_queue[splitter as usize] = false;
            if self.is_discrete() {
                continue;
            }
            ws.members.clear();
            ws.members.extend_from_slice(self.cell(splitter));
            trace = mix(trace, splitter as u64);

            for &w in &ws.members {
                for &u in g.neighbors(w) {
                    if ws.count[u as usize] == 0 {
                        ws.touched.push(u);
                    }
                    ws.count[u as usize] += 1;
                }
            }
            // group touched vertices by cell, cells in position order
            let cell_of = &self.cell_of;
            ws.touched
                .sort_unstable_by_key(|&u| (cell_of[u as usize], u));
            let mut i = 0;
            while i < ws.touched.len() {
                let s = self.cell_of[ws.touched[i] as usize];
                let mut j = i + 1;
                while j < ws.touched.len() && self.cell_of[ws.touched[j] as usize] == s {
                    j += 1;
                }
                ws.touched_cells.clear();
                ws.touched_cells.extend_from_slice(&ws.touched[i..j]);
                trace = self.split_cell(s, &mut queue, ws, trace);
                i = j;
            }
            for &u in &ws.touched {
                ws.count[u as usize] = 0;
            }
            ws.touched.clear();
        }
        mix(trace, self.cells as u64)
    }

    /// Splits cell `s` by neighbour count; the touched vertices of the cell
    /// are in `ws.touched_cells`, everything else in the cell has count 0.
    fn split_cell(
        &mut self,
        s: u32,
        queue: &mut VecDeque<u32>,
        ws: &mut Workspace,
        mut trace: u64,
    ) -> u64 {
        let (su, e) = (s as usize, self.cell_end[s as usize] as usize);
        let k = ws.touched_cells.len();
        // move the touched vertices to the tail of the cell
        for (idx, &v) in ws.touched_cells.iter().enumerate() {
            let target = e - 1 - idx;
            let p = self.pos[v as usize] as usize;
            let other = self.lab[target];
            self.lab.swap(p, target);
            self.pos[other as usize] = p as u32;
            self.pos[v as usize] = target as u32;
        }
        let count = &ws.count;
        self.lab[e - k..e].sort_unstable_by_key(|&v| count[v as usize]);
        for i in e - k..e {
            self.pos[self.lab[i] as usize] = i as u32;
        }
        let lo = if k < e - su {
            0
        } else {
            count[self.lab[su] as usize]
        };
        let hi = count[self.lab[e - 1] as usize];
        trace = mix(trace, s as u64);
        trace = mix(trace, ((lo as u64) << 32) | hi as u64);
        if lo == hi {
            return trace;
        }
        let was_queued = ws.in_queue[su];
        let mut frags: Vec<(u32, u32)> = Vec::new();
        let mut start = su;
        while start < e {
            let c = if start < e - k {
                0
            } else {
                count[self.lab[start] as usize]
            };
            let mut end = start + 1;
            if start < e - k {
                end = e - k;
            } else {
                while end < e && count[self.lab[end] as usize] == c {
                    end += 1;
                }
            }
            frags.push((start as u32, end as u32));
            trace = mix(trace, ((c as u64) << 32) | (end - start) as u64);
            start = end;
        }
        for &(fs, fe) in &frags[1..] {
            for i in fs..fe {
                self.cell_of[self.lab[i as usize] as usize] = fs;
            }
        }
        for &(fs, fe) in &frags {
            self.cell_end[fs as usize] = fe;
        }
        self.cells += frags.len() - 1;

        // Hopcroft: a cell already processed only needs all but one fragment
        let skip = if was_queued {
            Some(frags[0].0)
        } else {
            frags
                .iter()
                .max_by_key(|&&(fs, fe)| (fe - fs, std::cmp::Reverse(fs)))
                .map(|f| f.0)
        };
        for &(fs, _) in &frags {
            if Some(fs) != skip && !ws.in_queue[fs as usize] {
                ws.in_queue[fs as usize] = true;
                queue.push_back(fs);
            }
        }
        trace
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: u32) -> DenseGraph {
        let adj = (0..n)
            .map(|i| {
                let mut v = Vec::new();
                if i > 0 {
                    v.push(i - 1);
                }
                if i + 1 < n {
                    v.push(i + 1);
                }
                v
            })
            .collect();
        DenseGraph::from_adjacency(adj)
    }

    fn refined(g: &DenseGraph) -> Partition {
        let mut p = Partition::from_colors(&vec![0; g.len()]);
        let mut ws = Workspace::new(g.len());
        p.refine(g, &[0], &mut ws);
        p
    }

    #[test]
    fn path_refines_to_distance_from_end_classes() {
        let p = refined(&path(5));
        assert_eq!(p.cell_count(), 3);
        for s in p.cell_starts() {
            let mut cell = p.cell(s).to_vec();
            cell.sort();
            assert!(
                cell == vec![0, 4] || cell == vec![1, 3] || cell == vec![2],
                "{cell:?}"
            );
        }
    }

    #[test]
    fn individualizing_an_end_discretizes_a_path() {
        let g = path(6);
        let mut p = refined(&g);
        let s = p.individualize(0);
        let mut ws = Workspace::new(6);
        p.refine(&g, &[s], &mut ws);
        assert!(p.is_discrete());
    }

    #[test]
    fn trace_is_label_invariant() {
        // the same path with reversed labels gives identical traces
        let g = path(7);
        let rev = DenseGraph::from_adjacency(
            (0..7u32)
                .map(|i| g.neighbors(6 - i).iter().map(|&u| 6 - u).collect())
                .collect(),
        );
        let mut ws = Workspace::new(7);
        let mut a = Partition::from_colors(&[0; 7]);
        let mut b = Partition::from_colors(&[0; 7]);
        let ta = a.refine(&g, &[0], &mut ws);
        let tb = b.refine(&rev, &[0], &mut ws);
        assert_eq!(ta, tb);
        let sa = a.individualize(1);
        let sb = b.individualize(5);
        assert_eq!(a.refine(&g, &[sa], &mut ws), b.refine(&rev, &[sb], &mut ws));
        for (&x, &y) in a.lab.iter().zip(&b.lab) {
            assert_eq!(y, 6 - x);
        }
    }
}

//! Planar link diagrams encoded as crossing quadruples.
//!
//! A crossing lists its four incident arcs counterclockwise starting from
//! the incoming under-strand: the quadruple `X(a, b, c, d)` puts `a` at the
//! south port with the under-strand running south to north, and `b`, `c`,
//! `d` at east, north, west. Orientations are reconstructed from the
//! quadruples, crossing signs follow from the orientations, and everything
//! else — Gauss codes, cables, Reidemeister moves — is derived structure.
//!
//! Conventions fixed here and used by every other module:
//! - Ports are numbered 0..4 = S, E, N, W, counterclockwise.
//! - A crossing is positive when its over-strand runs W to E (out of port
//!   1), negative when it runs E to W; equivalently the sign is the cross
//!   product of the over and under directions.
//! - Crossing-free unknot components cannot be expressed by quadruples and
//!   are carried as explicit loops, each tagged with a carrier `(component,
//!   copy)` recording which component of the diagram they were produced
//!   from.
//! - Components are ordered by their least arc id; crossing-free loops come
//!   after all arc components, in input order.
//! - Cable copies of a component are indexed so that copy 0 follows the
//!   original curve and copy t runs parallel at distance t on the left of
//!   the direction of travel.

use std::collections::BTreeMap;

use crate::{Error, Result};

/// Persistent crossing identity: the index of the originating crossing plus
/// the pair of cable copy indices (under-strand copy, over-strand copy).
/// Plain parsed diagrams use copies `(0, 0)`.
pub type CrossKey = (usize, usize, usize);

/// One crossing. `ports[k]` is the arc at port `k` in the S, E, N, W
/// counterclockwise order; the under-strand enters at port 0 and leaves at
/// port 2, and `sign` records the crossing sign under the diagram's
/// orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub key: CrossKey,
    pub ports: [usize; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn under_in(&self) -> usize {
        self.ports[0]
    }

    pub fn under_out(&self) -> usize {
        self.ports[2]
    }

    pub fn over_in(&self) -> usize {
        if self.sign > 0 {
            self.ports[3]
        } else {
            self.ports[1]
        }
    }

    pub fn over_out(&self) -> usize {
        if self.sign > 0 {
            self.ports[1]
        } else {
            self.ports[3]
        }
    }
}

/// An end of an arc: which crossing and which port it plugs into.
pub type PortRef = (usize, u8);

#[derive(Clone, Debug)]
struct ArcEnds {
    /// The two ports carrying this arc, in scan order.
    ends: [PortRef; 2],
    /// Index into `ends` of the head (the end the arc flows into).
    head: u8,
}

impl ArcEnds {
    fn head_ref(&self) -> PortRef {
        self.ends[self.head as usize]
    }

    fn tail_ref(&self) -> PortRef {
        self.ends[1 - self.head as usize]
    }
}

/// A validated, oriented link diagram.
#[derive(Clone, Debug)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    n_arcs: usize,
    /// Crossing-free unknot components, each tagged `(component, copy)`
    /// with the component index of the diagram it was produced from (for a
    /// parsed diagram, its own index).
    free_loops: Vec<(usize, usize)>,
    arc_ends: Vec<ArcEnds>,
    /// Arc components in traversal order, each starting at its least arc;
    /// component list ordered by that least arc.
    components: Vec<Vec<usize>>,
    arc_comp: Vec<usize>,
}

/// One crossing visit during a component traversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussVisit {
    pub key: CrossKey,
    pub over: bool,
    pub sign: i8,
}

/// Per-component crossing visit sequences, plus the number of crossing-free
/// unknot components (which contribute empty sequences).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussCode {
    pub components: Vec<Vec<GaussVisit>>,
    pub free_loops: usize,
}

/// A site for an R2 insertion: two distinct-arc occurrences on one face,
/// given as directed edges `(arc, reversed)`. The strand of `e` is pushed
/// across the strand of `f`, passing over it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct R2Site {
    pub e: (usize, bool),
    pub f: (usize, bool),
}

/// A site for an R3 move: a triangular face with three distinct corner
/// crossings, given by its directed boundary edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R3Site {
    pub edges: [(usize, bool); 3],
}

/// Tiny union-find used for circle tracing, cable plumbing and
/// connected-piece detection.
#[derive(Clone, Debug)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller index as representative so class order is
            // stable.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

impl LinkDiagram {
    pub fn empty() -> Self {
        LinkDiagram {
            crossings: Vec::new(),
            n_arcs: 0,
            free_loops: Vec::new(),
            arc_ends: Vec::new(),
            components: Vec::new(),
            arc_comp: Vec::new(),
        }
    }

    /// Builds a diagram from quadruples with arc ids already normalized to
    /// `0..n_arcs`, inferring orientations and signs. `unknots` adds that
    /// many crossing-free components.
    pub fn from_quadruples(quads: Vec<[usize; 4]>, unknots: usize) -> Result<Self> {
        let crossings: Vec<Crossing> = quads
            .into_iter()
            .enumerate()
            .map(|(i, ports)| Crossing { key: (i, 0, 0), ports, sign: 0 })
            .collect();
        let ends = collect_ends(&crossings)?;
        let signs = infer_signs(&crossings, &ends)?;
        let crossings = crossings
            .into_iter()
            .zip(&signs)
            .map(|(c, &s)| Crossing { sign: s, ..c })
            .collect();
        let mut d = Self::finish(crossings, Vec::new())?;
        let arc_comps = d.components.len();
        d.free_loops = (0..unknots).map(|i| (arc_comps + i, 0)).collect();
        Ok(d)
    }

    /// Builds a diagram whose crossing signs are already known (cables,
    /// move results). The signs are not trusted: orientation consistency
    /// and planarity are fully re-checked.
    pub fn from_signed_parts(
        crossings: Vec<Crossing>,
        free_loops: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let mut d = Self::finish(crossings, free_loops)?;
        d.free_loops.sort();
        Ok(d)
    }

    fn finish(crossings: Vec<Crossing>, free_loops: Vec<(usize, usize)>) -> Result<Self> {
        let ends = collect_ends(&crossings)?;
        let arc_ends = orient_with_signs(&crossings, ends)?;
        let (components, arc_comp) = trace_components(&crossings, &arc_ends);
        let d = LinkDiagram {
            n_arcs: arc_ends.len(),
            crossings,
            free_loops,
            arc_ends,
            components,
            arc_comp,
        };
        d.check_planar()?;
        Ok(d)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn n_arcs(&self) -> usize {
        self.n_arcs
    }

    pub fn free_loops(&self) -> &[(usize, usize)] {
        &self.free_loops
    }

    /// Arc components in traversal order; crossing-free loops are not
    /// listed here, they follow these in component numbering.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len() + self.free_loops.len()
    }

    pub fn arc_component(&self, arc: usize) -> usize {
        self.arc_comp[arc]
    }

    /// The head end (the port the arc flows into) of an arc.
    pub fn arc_head(&self, arc: usize) -> PortRef {
        self.arc_ends[arc].head_ref()
    }

    /// The tail end (the port the arc flows out of) of an arc.
    pub fn arc_tail(&self, arc: usize) -> PortRef {
        self.arc_ends[arc].tail_ref()
    }

    pub fn n_plus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign < 0).count()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    /// Self-writhe per component (free loops included, always 0): the sum
    /// of signs over crossings where a component crosses itself.
    pub fn writhe_by_component(&self) -> Vec<i64> {
        let mut w = vec![0i64; self.component_count()];
        for c in &self.crossings {
            let cu = self.arc_comp[c.under_in()];
            let co = self.arc_comp[c.over_in()];
            if cu == co {
                w[cu] += c.sign as i64;
            }
        }
        w
    }

    /// Crossing visit sequence of every component, in component order.
    pub fn gauss_code(&self) -> GaussCode {
        let components = self
            .components
            .iter()
            .map(|arcs| {
                arcs.iter()
                    .map(|&a| {
                        let (ci, p) = self.arc_ends[a].head_ref();
                        let c = &self.crossings[ci];
                        GaussVisit { key: c.key, over: p == 1 || p == 3, sign: c.sign }
                    })
                    .collect()
            })
            .collect();
        GaussCode { components, free_loops: self.free_loops.len() }
    }

    /// Faces of the underlying 4-valent plane graph, each as the cyclic
    /// list of directed edges `(arc, reversed)` met along its boundary.
    pub fn faces(&self) -> Vec<Vec<(usize, bool)>> {
        let nd = 2 * self.n_arcs;
        let mut seen = vec![false; nd];
        let mut faces = Vec::new();
        for start in 0..nd {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut de = start;
            while !seen[de] {
                seen[de] = true;
                face.push((de / 2, de % 2 == 1));
                de = self.next_directed_edge(de);
            }
            faces.push(face);
        }
        faces
    }

    /// Successor of a directed edge around its face: arrive at the head
    /// port, turn to the counterclockwise-next port, leave along its arc.
    fn next_directed_edge(&self, de: usize) -> usize {
        let (arc, rev) = (de / 2, de % 2 == 1);
        let e = &self.arc_ends[arc];
        let (ci, p) = if rev { e.tail_ref() } else { e.head_ref() };
        let p2 = (p + 1) % 4;
        let arc2 = self.crossings[ci].ports[p2 as usize];
        let rev2 = self.arc_ends[arc2].tail_ref() != (ci, p2);
        arc2 * 2 + if rev2 { 1 } else { 0 }
    }

    /// Rotation-system planarity: every connected piece of the 4-valent
    /// graph must satisfy F = V + 2.
    fn check_planar(&self) -> Result<()> {
        if self.crossings.is_empty() {
            return Ok(());
        }
        let mut dsu = Dsu::new(self.crossings.len());
        for e in &self.arc_ends {
            dsu.union(e.ends[0].0, e.ends[1].0);
        }
        let mut v_count: BTreeMap<usize, usize> = BTreeMap::new();
        for ci in 0..self.crossings.len() {
            *v_count.entry(dsu.find(ci)).or_insert(0) += 1;
        }
        let mut f_count: BTreeMap<usize, usize> = BTreeMap::new();
        for face in self.faces() {
            let (ci, _) = self.arc_ends[face[0].0].ends[0];
            *f_count.entry(dsu.find(ci)).or_insert(0) += 1;
        }
        for (piece, &v) in &v_count {
            let f = f_count.get(piece).copied().unwrap_or(0);
            if f != v + 2 {
                return Err(Error::Parse(format!(
                    "diagram is not planar: a piece with {} crossings has {} faces, expected {}",
                    v,
                    f,
                    v + 2
                )));
            }
        }
        Ok(())
    }

    /// Switches every crossing (over becomes under), producing the mirror
    /// image diagram.
    pub fn mirror(&self) -> LinkDiagram {
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.ports;
                // The old over-in port becomes the incoming under-strand;
                // keep the counterclockwise reading order.
                let ports = if c.sign > 0 { [d, a, b, cc] } else { [b, cc, d, a] };
                Crossing { key: c.key, ports, sign: -c.sign }
            })
            .collect();
        Self::from_signed_parts(crossings, self.free_loops.clone())
            .expect("mirror of a valid diagram is valid")
    }

    /// Disjoint union, shifting `other`'s arcs, crossing keys, and loop
    /// carriers past this diagram's.
    pub fn disjoint_union(&self, other: &LinkDiagram) -> LinkDiagram {
        let arc_shift = self.n_arcs;
        let key_shift = self.crossings.len();
        let comp_shift = self.component_count();
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|c| Crossing {
            key: (c.key.0 + key_shift, c.key.1, c.key.2),
            ports: c.ports.map(|a| a + arc_shift),
            sign: c.sign,
        }));
        let mut free_loops = self.free_loops.clone();
        free_loops.extend(other.free_loops.iter().map(|&(c, t)| (c + comp_shift, t)));
        Self::from_signed_parts(crossings, free_loops)
            .expect("disjoint union of valid diagrams is valid")
    }

    /// The full cable: component `i` replaced by `m[i]` parallel copies
    /// under the blackboard framing.
    pub fn cable(&self, m: &[usize]) -> Result<LinkDiagram> {
        let copies: Vec<Vec<usize>> = m.iter().map(|&k| (0..k).collect()).collect();
        self.cable_with_copies(&copies)
    }

    /// Cable on an explicit subset of copy indices per component. Copy t
    /// runs parallel to the original at offset t to the left of travel;
    /// passing a subset keeps those offsets, which is how contracted
    /// diagrams (cables with strands deleted) are produced.
    ///
    /// Grid crossings inherit the original sign and get key `(x, u, v)`
    /// for original crossing index `x`, under-strand copy `u`, over-strand
    /// copy `v` — so crossings of different subsets of the same cable can
    /// be identified.
    pub fn cable_with_copies(&self, copies: &[Vec<usize>]) -> Result<LinkDiagram> {
        if copies.len() != self.component_count() {
            return Err(Error::Parse(format!(
                "cable wants one copy list per component: got {}, diagram has {}",
                copies.len(),
                self.component_count()
            )));
        }
        for list in copies {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse("cable copy lists must be strictly increasing".into()));
            }
        }

        // Boundary arc nodes, one per (arc, copy), allocated in (arc, copy)
        // order so that the eventual arc numbering starts every cable
        // component at the copy of the original component's least arc.
        let mut offset = vec![0usize; self.n_arcs + 1];
        for a in 0..self.n_arcs {
            offset[a + 1] = offset[a] + copies[self.arc_comp[a]].len();
        }
        let n_boundary = offset[self.n_arcs];
        let node = |a: usize, rank: usize| offset[a] + rank;

        let mut dsu = Dsu::new(n_boundary);
        let mut blocks = Vec::new();
        for (xi, c) in self.crossings.iter().enumerate() {
            let cu = self.arc_comp[c.under_in()];
            let co = self.arc_comp[c.over_in()];
            let p = copies[cu].len();
            let q = copies[co].len();
            if p == 0 && q == 0 {
                continue;
            }
            if q == 0 {
                // The over-strand is gone; under copies pass straight
                // through, merging their entry and exit arcs.
                for r in 0..p {
                    dsu.union(node(c.under_in(), r), node(c.under_out(), r));
                }
                continue;
            }
            if p == 0 {
                for r in 0..q {
                    dsu.union(node(c.over_in(), r), node(c.over_out(), r));
                }
                continue;
            }
            blocks.push((xi, cu, co, p, q));
        }

        // A boundary class survives as an arc only if some member plugs
        // into a surviving crossing block; classes that never do are whole
        // components that closed up without crossings: free loops.
        let mut touched = vec![false; n_boundary];
        for &(xi, _, _, p, q) in &blocks {
            let c = &self.crossings[xi];
            for r in 0..p {
                touched[dsu.find(node(c.under_in(), r))] = true;
                touched[dsu.find(node(c.under_out(), r))] = true;
            }
            for r in 0..q {
                touched[dsu.find(node(c.over_in(), r))] = true;
                touched[dsu.find(node(c.over_out(), r))] = true;
            }
        }

        let mut arc_id = vec![usize::MAX; n_boundary];
        let mut next_arc = 0usize;
        for a in 0..self.n_arcs {
            let comp = self.arc_comp[a];
            for r in 0..copies[comp].len() {
                let rep = dsu.find(node(a, r));
                if touched[rep] && arc_id[rep] == usize::MAX {
                    arc_id[rep] = next_arc;
                    next_arc += 1;
                }
            }
        }

        // Free loops from untouched classes, one per class, tagged by the
        // least (component, copy) member; then cables of loops that were
        // already crossing-free.
        let mut free_loops = Vec::new();
        let mut loop_seen = vec![false; n_boundary];
        for a in 0..self.n_arcs {
            let comp = self.arc_comp[a];
            for (r, &copy) in copies[comp].iter().enumerate() {
                let rep = dsu.find(node(a, r));
                if !touched[rep] && !loop_seen[rep] {
                    loop_seen[rep] = true;
                    free_loops.push((comp, copy));
                }
            }
        }
        for fl in 0..self.free_loops.len() {
            let comp = self.components.len() + fl;
            for &copy in &copies[comp] {
                free_loops.push((comp, copy));
            }
        }

        // Grid crossings. Along an under line the over copies are met in
        // ascending rank for positive crossings and descending for
        // negative; along an over line the under copies are met descending
        // for positive and ascending for negative. (This is what "push
        // copies to the left of travel" looks like once the under-strand is
        // rotated to run northward.)
        let mut crossings = Vec::new();
        let mut internal_base = vec![0usize; blocks.len() + 1];
        for (bi, &(_, _, _, p, q)) in blocks.iter().enumerate() {
            internal_base[bi + 1] = internal_base[bi] + p * (q - 1) + q * (p - 1);
        }
        let internal_offset = next_arc;
        for (bi, &(xi, _, _, p, q)) in blocks.iter().enumerate() {
            let c = &self.crossings[xi];
            let pos = c.sign > 0;
            let under_ends: Vec<(usize, usize)> = (0..p)
                .map(|ru| {
                    (
                        arc_id[dsu.find(node(c.under_in(), ru))],
                        arc_id[dsu.find(node(c.under_out(), ru))],
                    )
                })
                .collect();
            let over_ends: Vec<(usize, usize)> = (0..q)
                .map(|rv| {
                    (
                        arc_id[dsu.find(node(c.over_in(), rv))],
                        arc_id[dsu.find(node(c.over_out(), rv))],
                    )
                })
                .collect();
            let under_seg = |ru: usize, k: usize| -> usize {
                if k == 0 {
                    under_ends[ru].0
                } else if k == q {
                    under_ends[ru].1
                } else {
                    internal_offset + internal_base[bi] + ru * (q - 1) + (k - 1)
                }
            };
            let over_seg = |rv: usize, k: usize| -> usize {
                if k == 0 {
                    over_ends[rv].0
                } else if k == p {
                    over_ends[rv].1
                } else {
                    internal_offset + internal_base[bi] + p * (q - 1) + rv * (p - 1) + (k - 1)
                }
            };
            let cu = self.arc_comp[c.under_in()];
            let co = self.arc_comp[c.over_in()];
            for ru in 0..p {
                for rv in 0..q {
                    // Position of this grid crossing along both lines.
                    let ku = if pos { rv } else { q - 1 - rv };
                    let ko = if pos { p - 1 - ru } else { ru };
                    let s_port = under_seg(ru, ku);
                    let n_port = under_seg(ru, ku + 1);
                    let (w_port, e_port) = if pos {
                        (over_seg(rv, ko), over_seg(rv, ko + 1))
                    } else {
                        (over_seg(rv, ko + 1), over_seg(rv, ko))
                    };
                    crossings.push(Crossing {
                        key: (xi, copies[cu][ru], copies[co][rv]),
                        ports: [s_port, e_port, n_port, w_port],
                        sign: c.sign,
                    });
                }
            }
        }

        Self::from_signed_parts(crossings, free_loops)
    }

    /// Inserts a canceling pair of opposite kinks on an arc, preserving the
    /// writhe (the framed version of the first Reidemeister move).
    pub fn apply_framed_r1(&self, arc: usize) -> Result<LinkDiagram> {
        if arc >= self.n_arcs {
            return Err(Error::Parse(format!("no arc {} to put kinks on", arc)));
        }
        let n = self.n_arcs;
        let (mid, l1, l2, e2) = (n, n + 1, n + 2, n + 3);
        let key_base = self.crossings.len();
        let mut crossings = self.crossings.clone();
        // Walking along the arc: a positive curl, then a negative one.
        crossings.push(Crossing { key: (key_base, 0, 0), ports: [arc, mid, l1, l1], sign: 1 });
        crossings.push(Crossing { key: (key_base + 1, 0, 0), ports: [mid, l2, l2, e2], sign: -1 });
        let (hc, hp) = self.arc_ends[arc].head_ref();
        crossings[hc].ports[hp as usize] = e2;
        Self::from_signed_parts(crossings, self.free_loops.clone())
    }

    /// All R2 insertion sites: ordered pairs of distinct-arc occurrences on
    /// a common face (the first strand is pushed over the second).
    pub fn r2_sites(&self) -> Vec<R2Site> {
        let mut sites = Vec::new();
        for face in self.faces() {
            for &e in &face {
                for &f in &face {
                    if e.0 != f.0 {
                        sites.push(R2Site { e, f });
                    }
                }
            }
        }
        sites
    }

    /// Performs an R2 insertion: pushes a finger of the `e` strand across
    /// the `f` strand inside their common face, adding one positive and one
    /// negative crossing with `e` over `f` at both.
    pub fn apply_r2(&self, site: R2Site) -> Result<LinkDiagram> {
        let on_common_face = self
            .faces()
            .iter()
            .any(|face| face.contains(&site.e) && face.contains(&site.f));
        if site.e.0 == site.f.0 || !on_common_face {
            return Err(Error::Parse("R2 site does not designate two arcs on one face".into()));
        }
        // Work in the face frame: the boundary walk keeps the face on the
        // right, so orient the frame with e traced eastward along the top
        // and f traced westward along the bottom, the face between them.
        // The finger of e dips south across f, crossing at C1 (west) then
        // C2 (east). Compass sides are encoded 0..4 = E, N, W, S so that
        // +1 is a counterclockwise turn in the true plane.
        let (ea, erev) = site.e;
        let (fa, frev) = site.f;
        let n = self.n_arcs;
        let (em, ee, fm, fe) = (n, n + 1, n + 2, n + 3);
        let re_east = !erev;
        let rf_west = !frev;
        const EAST: usize = 0;
        const NORTH: usize = 1;
        const WEST: usize = 2;
        const SOUTH: usize = 3;
        // side -> arc maps for the two new crossings: the arch of the
        // finger (em) runs below f, e's outer pieces attach from above.
        let mut c1 = [usize::MAX; 4];
        let mut c2 = [usize::MAX; 4];
        c1[SOUTH] = em;
        c2[SOUTH] = em;
        if re_east {
            c1[NORTH] = ea;
            c2[NORTH] = ee;
        } else {
            c1[NORTH] = ee;
            c2[NORTH] = ea;
        }
        if rf_west {
            c2[EAST] = fa;
            c2[WEST] = fm;
            c1[EAST] = fm;
            c1[WEST] = fe;
        } else {
            c1[WEST] = fa;
            c1[EAST] = fm;
            c2[WEST] = fm;
            c2[EAST] = fe;
        }
        let under_in = if rf_west { EAST } else { WEST };
        // e dips south at its first crossing along the finger and returns
        // north at the second.
        let e_north_at_c1 = !re_east;
        let quad = |sides: &[usize; 4], e_north: bool| -> ([usize; 4], i8) {
            let ports = [
                sides[under_in],
                sides[(under_in + 1) % 4],
                sides[(under_in + 2) % 4],
                sides[(under_in + 3) % 4],
            ];
            let sign = if e_north == rf_west { 1 } else { -1 };
            (ports, sign)
        };
        let (p1, s1) = quad(&c1, e_north_at_c1);
        let (p2, s2) = quad(&c2, !e_north_at_c1);
        let key_base = self.crossings.len();
        let mut crossings = self.crossings.clone();
        let (ehc, ehp) = self.arc_ends[ea].head_ref();
        crossings[ehc].ports[ehp as usize] = ee;
        let (fhc, fhp) = self.arc_ends[fa].head_ref();
        crossings[fhc].ports[fhp as usize] = fe;
        crossings.push(Crossing { key: (key_base, 0, 0), ports: p1, sign: s1 });
        crossings.push(Crossing { key: (key_base + 1, 0, 0), ports: p2, sign: s2 });
        Self::from_signed_parts(crossings, self.free_loops.clone())
    }

    /// All R3 sites: triangular faces with three distinct corner crossings
    /// whose over/under pattern is linear (some strand passes over both
    /// others), which is exactly when the triangle can be slid.
    pub fn r3_sites(&self) -> Vec<R3Site> {
        let mut sites = Vec::new();
        'faces: for face in self.faces() {
            if face.len() != 3 {
                continue;
            }
            let mut corners = [0usize; 3];
            for (i, &(arc, rev)) in face.iter().enumerate() {
                let e = &self.arc_ends[arc];
                let (ci, _) = if rev { e.tail_ref() } else { e.head_ref() };
                corners[i] = ci;
            }
            if corners[0] == corners[1] || corners[1] == corners[2] || corners[0] == corners[2] {
                continue;
            }
            // Strand i of the triangle is the one carrying edge arc i; it
            // passes through two of the corners. Check some strand is over
            // at both of its corners.
            let mut over_at_both = false;
            for (i, &(arc, _)) in face.iter().enumerate() {
                let e = &self.arc_ends[arc];
                let both_over = e.ends.iter().all(|&(ci, p)| {
                    (p == 1 || p == 3) && (ci == corners[i] || ci == corners[(i + 2) % 3])
                });
                // The edge arc's two ends are exactly its two corners for a
                // genuine triangle side; if not, this face is too
                // degenerate to slide.
                let ends_are_corners = e.ends.iter().all(|&(ci, _)| {
                    ci == corners[i] || ci == corners[(i + 2) % 3]
                });
                if !ends_are_corners {
                    continue 'faces;
                }
                if both_over {
                    over_at_both = true;
                }
            }
            if over_at_both {
                sites.push(R3Site { edges: [face[0], face[1], face[2]] });
            }
        }
        sites
    }

    /// Slides the triangle across itself (the third Reidemeister move):
    /// every strand's two triangle crossings swap order along it, keeping
    /// all crossings, signs, and arc ids.
    pub fn apply_r3(&self, site: &R3Site) -> Result<LinkDiagram> {
        // Only the three arcs matter for the rewiring, so match sites by
        // arc set: sliding reverses the boundary walk of the triangle, and
        // this way the same site value undoes the slide.
        let arcs_of = |s: &R3Site| {
            let mut a = [s.edges[0].0, s.edges[1].0, s.edges[2].0];
            a.sort_unstable();
            a
        };
        let want = arcs_of(site);
        let found = self.r3_sites().iter().any(|s| arcs_of(s) == want);
        if !found {
            return Err(Error::Parse("R3 site is not a slidable triangle of this diagram".into()));
        }
        let mut crossings = self.crossings.clone();
        for &(arc, _) in &site.edges {
            let e = &self.arc_ends[arc];
            // The strand runs in_s -> cA -> arc -> cB -> out_s; after the
            // slide it runs in_s -> cB -> arc -> cA -> out_s.
            let (ca, pa_out) = e.tail_ref();
            let (cb, pb_in) = e.head_ref();
            let pa_in = (pa_out + 2) % 4;
            let pb_out = (pb_in + 2) % 4;
            let in_s = self.crossings[ca].ports[pa_in as usize];
            let out_s = self.crossings[cb].ports[pb_out as usize];
            crossings[ca].ports[pa_in as usize] = arc;
            crossings[ca].ports[pa_out as usize] = out_s;
            crossings[cb].ports[pb_in as usize] = in_s;
            crossings[cb].ports[pb_out as usize] = arc;
        }
        Self::from_signed_parts(crossings, self.free_loops.clone())
    }

    /// PD text form, arcs renumbered 1-based.
    pub fn to_pd_text(&self) -> String {
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|c| {
                format!(
                    "X({},{},{},{})",
                    c.ports[0] + 1,
                    c.ports[1] + 1,
                    c.ports[2] + 1,
                    c.ports[3] + 1
                )
            })
            .collect();
        if !self.free_loops.is_empty() {
            parts.push(format!("U({})", self.free_loops.len()));
        }
        if parts.is_empty() {
            String::new()
        } else {
            parts.join(" ")
        }
    }

    /// JSON mirror of the PD text form.
    pub fn to_pd_json(&self) -> serde_json::Value {
        let crossings: Vec<Vec<usize>> = self
            .crossings
            .iter()
            .map(|c| c.ports.iter().map(|&a| a + 1).collect())
            .collect();
        serde_json::json!({
            "crossings": crossings,
            "unknots": self.free_loops.len(),
        })
    }
}

fn collect_ends(crossings: &[Crossing]) -> Result<Vec<[PortRef; 2]>> {
    let mut seen: BTreeMap<usize, Vec<PortRef>> = BTreeMap::new();
    for (ci, c) in crossings.iter().enumerate() {
        for (p, &a) in c.ports.iter().enumerate() {
            seen.entry(a).or_default().push((ci, p as u8));
        }
    }
    let n_arcs = seen.len();
    if let Some((&a, _)) = seen.iter().find(|&(&a, _)| a >= n_arcs) {
        return Err(Error::Parse(format!(
            "arc ids must be contiguous from 0: id {} with only {} arcs",
            a, n_arcs
        )));
    }
    let mut ends = Vec::with_capacity(n_arcs);
    for (a, refs) in seen {
        if refs.len() != 2 {
            return Err(Error::Parse(format!(
                "arc {} is used {} times, every arc must appear exactly twice",
                a,
                refs.len()
            )));
        }
        ends.push([refs[0], refs[1]]);
    }
    Ok(ends)
}

/// Polarity of a port under known signs: does an arc at this port flow
/// into the crossing?
fn port_is_head(port: u8, sign: i8) -> bool {
    match port {
        0 => true,
        2 => false,
        1 => sign < 0,
        3 => sign > 0,
        _ => unreachable!(),
    }
}

/// Checks the given signs orient every arc consistently and records each
/// arc's head end.
fn orient_with_signs(crossings: &[Crossing], ends: Vec<[PortRef; 2]>) -> Result<Vec<ArcEnds>> {
    ends.into_iter()
        .enumerate()
        .map(|(a, e)| {
            let head0 = port_is_head(e[0].1, crossings[e[0].0].sign);
            let head1 = port_is_head(e[1].1, crossings[e[1].0].sign);
            if head0 == head1 {
                return Err(Error::Law(format!(
                    "arc {} flows {} both of its crossings",
                    a,
                    if head0 { "into" } else { "out of" }
                )));
            }
            Ok(ArcEnds { ends: e, head: if head0 { 0 } else { 1 } })
        })
        .collect()
}

/// Reconstructs crossing signs from the quadruples alone. The under-strand
/// fixes port 0 as incoming and port 2 as outgoing; those seeds propagate
/// along arcs and across over-strands. Components that never pass under
/// anything are orientation-ambiguous; they get a deterministic default
/// (their least arc flows out of its lexically smaller end).
fn infer_signs(crossings: &[Crossing], ends: &[[PortRef; 2]]) -> Result<Vec<i8>> {
    let n_arcs = ends.len();
    // head_end[a]: which of the two ends the arc flows into.
    let mut head_end: Vec<Option<u8>> = vec![None; n_arcs];
    // over_dir[c]: true when the over-strand runs W -> E (positive).
    let mut over_dir: Vec<Option<bool>> = vec![None; crossings.len()];

    enum Task {
        End { arc: usize, end: u8, head: bool },
        Over { ci: usize, dir: bool },
    }
    let mut tasks: Vec<Task> = Vec::new();
    for (ci, c) in crossings.iter().enumerate() {
        for (p, &a) in c.ports.iter().enumerate() {
            if p == 0 || p == 2 {
                let end = if ends[a][0] == (ci, p as u8) { 0 } else { 1 };
                tasks.push(Task::End { arc: a, end, head: p == 0 });
            }
        }
    }

    let run = |tasks: &mut Vec<Task>,
               head_end: &mut Vec<Option<u8>>,
               over_dir: &mut Vec<Option<bool>>|
     -> Result<()> {
        while let Some(t) = tasks.pop() {
            match t {
                Task::End { arc, end, head } => {
                    let h = if head { end } else { 1 - end };
                    match head_end[arc] {
                        Some(prev) if prev != h => {
                            return Err(Error::Parse(format!(
                                "orientation conflict on arc {}",
                                arc
                            )));
                        }
                        Some(_) => {}
                        None => {
                            head_end[arc] = Some(h);
                            // Both ends now have known polarity; push any
                            // over-port consequences.
                            for (i, &(ci, p)) in ends[arc].iter().enumerate() {
                                let is_head = i as u8 == h;
                                let dir = match p {
                                    1 => !is_head,
                                    3 => is_head,
                                    _ => continue,
                                };
                                tasks.push(Task::Over { ci, dir });
                            }
                        }
                    }
                }
                Task::Over { ci, dir } => {
                    match over_dir[ci] {
                        Some(prev) if prev != dir => {
                            return Err(Error::Parse(format!(
                                "orientation conflict at crossing {}",
                                ci
                            )));
                        }
                        Some(_) => {}
                        None => {
                            over_dir[ci] = Some(dir);
                            for p in [1u8, 3] {
                                let a = crossings[ci].ports[p as usize];
                                let head = port_is_head(p, if dir { 1 } else { -1 });
                                let end = if ends[a][0] == (ci, p) { 0 } else { 1 };
                                tasks.push(Task::End { arc: a, end, head });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    };

    run(&mut tasks, &mut head_end, &mut over_dir)?;
    // Components with no under-passage got no seed; orient them by a fixed
    // default and propagate again until everything is determined.
    for a in 0..n_arcs {
        if head_end[a].is_none() {
            let tail = if ends[a][0] < ends[a][1] { 0u8 } else { 1 };
            tasks.push(Task::End { arc: a, end: 1 - tail, head: true });
            run(&mut tasks, &mut head_end, &mut over_dir)?;
        }
    }
    Ok(over_dir
        .into_iter()
        .map(|d| if d.expect("all over-directions determined") { 1 } else { -1 })
        .collect())
}

/// Walks every component from its least arc, following head ports through
/// crossings.
fn trace_components(
    crossings: &[Crossing],
    ends: &[ArcEnds],
) -> (Vec<Vec<usize>>, Vec<usize>) {
    let n_arcs = ends.len();
    let mut comp_of = vec![usize::MAX; n_arcs];
    let mut components = Vec::new();
    for start in 0..n_arcs {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let ci = components.len();
        let mut arcs = Vec::new();
        let mut a = start;
        loop {
            comp_of[a] = ci;
            arcs.push(a);
            let (c, p) = ends[a].head_ref();
            let out_port = match p {
                0 => 2,
                1 => 3,
                3 => 1,
                _ => unreachable!("port 2 is never a head"),
            };
            a = crossings[c].ports[out_port as usize];
            if a == start {
                break;
            }
        }
        components.push(arcs);
    }
    (components, comp_of)
}

/// Parses the PD text form (`X(a,b,c,d)` entries plus `U(n)` for n
/// crossing-free unknots) or its JSON mirror (`{"crossings": [[a,b,c,d],
/// ...], "unknots": n}`). Arc labels may be any distinct nonnegative
/// integers; they are normalized by sorted order. `#` starts a comment.
pub fn parse_pd(text: &str) -> Result<LinkDiagram> {
    let stripped: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let trimmed = stripped.trim();
    if trimmed.starts_with('{') {
        return parse_pd_json(trimmed);
    }
    let mut quads_raw: Vec<[u64; 4]> = Vec::new();
    let mut unknots = 0usize;
    let mut chars = trimmed.chars().peekable();
    loop {
        while matches!(chars.peek(), Some(c) if c.is_whitespace() || *c == ',' || *c == ';') {
            chars.next();
        }
        let Some(&head) = chars.peek() else { break };
        chars.next();
        let nums = parse_paren_ints(&mut chars)?;
        match head {
            'X' | 'x' => {
                if nums.len() != 4 {
                    return Err(Error::Parse(format!(
                        "X entry needs 4 arc labels, got {}",
                        nums.len()
                    )));
                }
                quads_raw.push([nums[0], nums[1], nums[2], nums[3]]);
            }
            'U' | 'u' => {
                if nums.len() != 1 {
                    return Err(Error::Parse("U entry needs one count".into()));
                }
                unknots += nums[0] as usize;
            }
            other => {
                return Err(Error::Parse(format!(
                    "expected X(...) or U(...), found {:?}",
                    other
                )));
            }
        }
    }
    build_from_raw(quads_raw, unknots)
}

fn parse_paren_ints(chars: &mut std::iter::Peekable<std::str::Chars>) -> Result<Vec<u64>> {
    while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
        chars.next();
    }
    if chars.next() != Some('(') {
        return Err(Error::Parse("expected '(' after entry tag".into()));
    }
    let mut nums = Vec::new();
    let mut cur = String::new();
    for c in chars.by_ref() {
        match c {
            ')' => {
                if !cur.trim().is_empty() {
                    nums.push(parse_u64(cur.trim())?);
                }
                return Ok(nums);
            }
            ',' => {
                nums.push(parse_u64(cur.trim())?);
                cur.clear();
            }
            _ => cur.push(c),
        }
    }
    Err(Error::Parse("unclosed '(' in entry".into()))
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse::<u64>()
        .map_err(|_| Error::Parse(format!("expected a nonnegative integer, found {:?}", s)))
}

fn parse_pd_json(text: &str) -> Result<LinkDiagram> {
    #[derive(serde::Deserialize)]
    struct Pd {
        #[serde(default)]
        crossings: Vec<[u64; 4]>,
        #[serde(default)]
        unknots: usize,
    }
    let pd: Pd =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad PD JSON: {}", e)))?;
    build_from_raw(pd.crossings, pd.unknots)
}

fn build_from_raw(quads_raw: Vec<[u64; 4]>, unknots: usize) -> Result<LinkDiagram> {
    let mut labels: Vec<u64> = quads_raw.iter().flatten().copied().collect();
    labels.sort_unstable();
    labels.dedup();
    let index: BTreeMap<u64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let quads: Vec<[usize; 4]> =
        quads_raw.iter().map(|q| q.map(|l| index[&l])).collect();
    LinkDiagram::from_quadruples(quads, unknots)
}

/// Ready-made small diagrams used across the test suites and handy from
/// the library: the standard closed-braid presentations.
pub mod corpus {
    use super::{parse_pd, LinkDiagram};

    /// Crossing-free unknot.
    pub fn unknot() -> LinkDiagram {
        parse_pd("U(1)").unwrap()
    }

    /// One-crossing unknot with a positive curl (writhe +1).
    pub fn kink_positive() -> LinkDiagram {
        parse_pd("X(1,1,2,2)").unwrap()
    }

    /// One-crossing unknot with a negative curl (writhe -1).
    pub fn kink_negative() -> LinkDiagram {
        parse_pd("X(1,2,2,1)").unwrap()
    }

    /// Positive Hopf link (linking number +1).
    pub fn hopf_positive() -> LinkDiagram {
        parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap()
    }

    /// Right-handed trefoil (writhe +3), closure of the 2-braid with three
    /// positive crossings.
    pub fn trefoil_right() -> LinkDiagram {
        parse_pd("X(2,4,3,1) X(4,6,5,3) X(6,2,1,5)").unwrap()
    }

    /// Left-handed trefoil (writhe -3).
    pub fn trefoil_left() -> LinkDiagram {
        trefoil_right().mirror()
    }

    /// Figure-eight knot (writhe 0, amphichiral), closure of the 3-braid
    /// alternating a positive and a negative generator twice.
    pub fn figure_eight() -> LinkDiagram {
        parse_pd("X(3,4,2,1) X(4,7,8,5) X(5,6,1,2) X(6,8,7,3)").unwrap()
    }

    /// The whole corpus with stable names.
    pub fn all() -> Vec<(&'static str, LinkDiagram)> {
        vec![
            ("unknot", unknot()),
            ("kink_positive", kink_positive()),
            ("kink_negative", kink_negative()),
            ("hopf_positive", hopf_positive()),
            ("trefoil_right", trefoil_right()),
            ("trefoil_left", trefoil_left()),
            ("figure_eight", figure_eight()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_empty_gives_empty_diagram() {
        let d = parse_pd("").unwrap();
        assert_eq!(d.component_count(), 0);
        assert_eq!(d.crossings().len(), 0);
    }

    #[test]
    fn parse_rejects_triple_use() {
        let err = parse_pd("X(1,1,1,2)").unwrap_err();
        assert!(matches!(err, Error::Parse(_)), "{err}");
    }

    #[test]
    fn kink_signs() {
        let plus = corpus::kink_positive();
        assert_eq!(plus.writhe(), 1);
        assert_eq!(plus.component_count(), 1);
        let minus = corpus::kink_negative();
        assert_eq!(minus.writhe(), -1);
    }

    #[test]
    fn trefoil_is_positive() {
        let d = corpus::trefoil_right();
        assert_eq!(d.writhe(), 3);
        assert_eq!(d.n_plus(), 3);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.components()[0].len(), 6);
    }

    #[test]
    fn hopf_components_and_writhe() {
        let d = corpus::hopf_positive();
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.writhe(), 2);
        // Self-writhe of each component is zero; the writhe is all linking.
        assert_eq!(d.writhe_by_component(), vec![0, 0]);
    }

    #[test]
    fn figure_eight_is_balanced() {
        let d = corpus::figure_eight();
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.n_plus(), 2);
        assert_eq!(d.n_minus(), 2);
        assert_eq!(d.writhe(), 0);
    }

    #[test]
    fn mirror_negates_writhe() {
        for (_, d) in corpus::all() {
            assert_eq!(d.mirror().writhe(), -d.writhe());
        }
    }

    #[test]
    fn nonplanar_code_rejected() {
        // Gauss sequence of the "virtual trefoil": two crossings visited
        // O1 O2 U1 U2 cannot close up in the plane.
        let err = parse_pd("X(1,3,2,4) X(2,4,3,1)");
        assert!(err.is_err());
    }

    #[test]
    fn json_mirror_roundtrip() {
        let d = corpus::trefoil_right();
        let json = d.to_pd_json().to_string();
        let d2 = parse_pd(&json).unwrap();
        assert_eq!(d2.writhe(), 3);
        assert_eq!(d2.crossings().len(), 3);
        let text = d.to_pd_text();
        let d3 = parse_pd(&text).unwrap();
        assert_eq!(d3.writhe(), 3);
    }

    #[test]
    fn gauss_code_of_trefoil_alternates() {
        let gc = corpus::trefoil_right().gauss_code();
        assert_eq!(gc.components.len(), 1);
        let word = &gc.components[0];
        assert_eq!(word.len(), 6);
        // Each crossing appears once over and once under.
        for ci in 0..3 {
            let visits: Vec<_> = word.iter().filter(|v| v.key == (ci, 0, 0)).collect();
            assert_eq!(visits.len(), 2);
            assert_ne!(visits[0].over, visits[1].over);
            assert_eq!(visits[0].sign, 1);
        }
        // The standard 2-braid closure alternates over/under along the
        // strand.
        let flags: Vec<bool> = word.iter().map(|v| v.over).collect();
        for i in 0..6 {
            assert_ne!(flags[i], flags[(i + 1) % 6]);
        }
    }

    #[test]
    fn unit_cable_is_identity() {
        for (name, d) in corpus::all() {
            let m = vec![1; d.component_count()];
            let c = d.cable(&m).unwrap();
            assert_eq!(c.crossings().len(), d.crossings().len(), "{name}");
            assert_eq!(c.component_count(), d.component_count(), "{name}");
            assert_eq!(c.writhe(), d.writhe(), "{name}");
            for (a, b) in d.crossings().iter().zip(c.crossings()) {
                assert_eq!(a.ports, b.ports, "{name}");
                assert_eq!(a.sign, b.sign, "{name}");
            }
        }
    }

    #[test]
    fn kink_two_cable_counts() {
        let c = corpus::kink_positive().cable(&[2]).unwrap();
        assert_eq!(c.crossings().len(), 4);
        assert_eq!(c.component_count(), 2);
        assert_eq!(c.writhe(), 4);
    }

    #[test]
    fn trefoil_two_cable_counts() {
        let c = corpus::trefoil_right().cable(&[2]).unwrap();
        assert_eq!(c.crossings().len(), 12);
        assert_eq!(c.component_count(), 2);
        assert_eq!(c.writhe(), 12);
    }

    #[test]
    fn zero_cable_is_empty() {
        let c = corpus::trefoil_right().cable(&[0]).unwrap();
        assert_eq!(c.crossings().len(), 0);
        assert_eq!(c.component_count(), 0);
    }

    #[test]
    fn hopf_cable_with_one_component_removed_leaves_free_loops() {
        let d = corpus::hopf_positive();
        let c = d.cable_with_copies(&[vec![0, 1], vec![]]).unwrap();
        assert_eq!(c.crossings().len(), 0);
        assert_eq!(c.free_loops().len(), 2);
        assert_eq!(c.free_loops(), &[(0, 0), (0, 1)]);
    }

    #[test]
    fn cable_grid_keys_are_complete() {
        let d = corpus::hopf_positive();
        let c = d.cable(&[2, 3]).unwrap();
        assert_eq!(c.crossings().len(), 12);
        let mut keys: Vec<CrossKey> = c.crossings().iter().map(|x| x.key).collect();
        keys.sort();
        let mut expect = Vec::new();
        for x in 0..2 {
            for u in 0..3 {
                for v in 0..3 {
                    // Component of the under strand differs per crossing;
                    // copies range over that component's count.
                    let (cu, co) = {
                        let c0 = &d.crossings()[x];
                        (d.arc_component(c0.under_in()), d.arc_component(c0.over_in()))
                    };
                    let mu = if cu == 0 { 2 } else { 3 };
                    let mv = if co == 0 { 2 } else { 3 };
                    if u < mu && v < mv {
                        expect.push((x, u, v));
                    }
                }
            }
        }
        expect.sort();
        expect.dedup();
        assert_eq!(keys, expect);
    }

    #[test]
    fn framed_r1_preserves_writhe_and_component_count() {
        let d = corpus::trefoil_right();
        for arc in 0..d.n_arcs() {
            let moved = d.apply_framed_r1(arc).unwrap();
            assert_eq!(moved.writhe(), d.writhe());
            assert_eq!(moved.crossings().len(), d.crossings().len() + 2);
            assert_eq!(moved.component_count(), d.component_count());
        }
    }

    #[test]
    fn r2_insertion_is_balanced() {
        let d = corpus::kink_positive();
        let sites = d.r2_sites();
        assert!(!sites.is_empty());
        for site in sites {
            let moved = d.apply_r2(site).unwrap();
            assert_eq!(moved.writhe(), d.writhe());
            assert_eq!(moved.crossings().len(), d.crossings().len() + 2);
            assert_eq!(moved.component_count(), d.component_count());
        }
    }

    #[test]
    fn r3_slide_is_an_involution() {
        // The plain corpus has no slidable triangles (the closed 2-braid
        // trefoil's two triangular faces are cyclic), so search diagrams
        // extended by one R2 insertion.
        let mut tested = 0;
        for (_, d) in corpus::all() {
            for site in d.r2_sites() {
                let ext = d.apply_r2(site).unwrap();
                for s3 in ext.r3_sites() {
                    let once = ext.apply_r3(&s3).unwrap();
                    let back = once.apply_r3(&s3).unwrap();
                    for (a, b) in ext.crossings().iter().zip(back.crossings()) {
                        assert_eq!(a.ports, b.ports);
                        assert_eq!(a.sign, b.sign);
                    }
                    tested += 1;
                }
            }
        }
        assert!(tested > 0, "no slidable triangles found anywhere");
    }

    #[test]
    fn disjoint_union_counts() {
        let a = corpus::trefoil_right();
        let b = corpus::hopf_positive();
        let u = a.disjoint_union(&b);
        assert_eq!(u.component_count(), 3);
        assert_eq!(u.crossings().len(), 5);
        assert_eq!(u.writhe(), 5);
    }
}

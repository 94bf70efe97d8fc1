//! Oriented link diagrams in PD notation.
//!
//! `X(a,b,c,d)` lists the four arcs counterclockwise starting from the
//! incoming under-strand, so the under-strand runs `a -> c`. Arc labels
//! increase along each component (with wraparound), which fixes the
//! direction of the over-strand except on components with at most two
//! arcs; there an explicit sign `X+(..)` / `X-(..)` is required.
//!
//! Sign convention: a crossing is positive iff the over-strand runs `d -> b`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Display};
use std::str::FromStr;

use thiserror::Error;

pub type Arc = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("arc {label} appears {count} times (expected 2)")]
    LabelCount { label: Arc, count: usize },
    #[error("crossing {0}: under-strand does not follow label succession")]
    Succession(usize),
    #[error("crossing {0}: over-strand direction is ambiguous, add an explicit +/- sign")]
    AmbiguousSign(usize),
    #[error("crossing {0}: declared sign contradicts label succession")]
    SignMismatch(usize),
    #[error("arc {0} is not traversed consistently")]
    Orientation(Arc),
    #[error("component index {0} out of range")]
    ComponentIndex(usize),
    #[error("empty component set")]
    EmptyKeep,
    #[error(transparent)]
    Site(#[from] SiteError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SiteError {
    #[error("crossing {0} does not exist")]
    NoCrossing(usize),
    #[error("crossings {0:?} do not bound a triangular face")]
    NoTriangle([usize; 3]),
    #[error("triangle {0:?} does not match a delta-move template")]
    Template([usize; 3]),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub arcs: [Arc; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn new(arcs: [Arc; 4], sign: i8) -> Self {
        assert!(sign == 1 || sign == -1);
        Self { arcs, sign }
    }

    /// (in-slot, out-slot) of the under- and over-strand.
    pub fn strands(&self) -> [(usize, usize); 2] {
        if self.sign > 0 {
            [(0, 2), (3, 1)]
        } else {
            [(0, 2), (1, 3)]
        }
    }

    pub fn is_over_slot(s: usize) -> bool {
        s % 2 == 1
    }

    pub fn over_in(&self) -> Arc { self.arcs[self.strands()[1].0] }
    pub fn over_out(&self) -> Arc { self.arcs[self.strands()[1].1] }
    pub fn under_in(&self) -> Arc { self.arcs[0] }
    pub fn under_out(&self) -> Arc { self.arcs[2] }

    /// The same crossing seen in the mirror: the over-strand becomes the
    /// under-strand and the list is rotated to start at its incoming end.
    pub fn mirror(&self) -> Self {
        let [a, b, c, d] = self.arcs;
        if self.sign > 0 {
            Self::new([d, a, b, c], -1)
        } else {
            Self::new([b, c, d, a], 1)
        }
    }
}

/// A corner of a face: crossing and the slot on its clockwise side. The
/// corner sits between slots `s` and `s + 1`.
pub type Corner = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DeltaSite {
    pub crossings: [usize; 3],
    pub triangle_arcs: [Arc; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingMatrix {
    entries: Vec<Vec<i64>>,
}

impl LinkingMatrix {
    pub fn size(&self) -> usize { self.entries.len() }
    pub fn get(&self, i: usize, j: usize) -> i64 { self.entries[i][j] }
    pub fn rows(&self) -> &[Vec<i64>] { &self.entries }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&v| v == 0)
    }

    pub fn off_diagonal_sum(&self) -> i64 {
        let m = self.size();
        (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).map(|(i, j)| self.entries[i][j]).sum()
    }

    /// Sorted multiset of `|lk(i,j)|`, `i < j`.
    pub fn abs_multiset(&self) -> Vec<i64> {
        let m = self.size();
        let mut v: Vec<_> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .map(|(i, j)| self.entries[i][j].abs()).collect();
        v.sort();
        v
    }
}

impl Display for LinkingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, row) in self.entries.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            let r: Vec<_> = row.iter().map(|v| format!("{v:>3}")).collect();
            write!(f, "[{}]", r.join(""))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    components: Vec<Vec<Arc>>, // arcs in traversal order
    free_loops: usize,
    comp_of: HashMap<Arc, usize>,
}

impl LinkDiagram {
    /// Builds a diagram from crossings with known signs. Components are
    /// ordered by their smallest label and traversed starting from it.
    pub fn from_crossings(crossings: Vec<Crossing>, free_loops: usize) -> Result<Self, DiagramError> {
        let mut succ: HashMap<Arc, Arc> = HashMap::new();
        let mut ins: HashMap<Arc, usize> = HashMap::new();
        let mut count: BTreeMap<Arc, usize> = BTreeMap::new();

        for x in &crossings {
            for &a in &x.arcs {
                *count.entry(a).or_default() += 1;
            }
        }
        if let Some((&label, &count)) = count.iter().find(|(_, &c)| c != 2) {
            return Err(DiagramError::LabelCount { label, count });
        }
        for x in &crossings {
            for (i, o) in x.strands() {
                *ins.entry(x.arcs[i]).or_default() += 1;
                if succ.insert(x.arcs[i], x.arcs[o]).is_some() {
                    return Err(DiagramError::Orientation(x.arcs[i]));
                }
            }
        }
        if let Some(&a) = count.keys().find(|a| ins.get(a) != Some(&1)) {
            return Err(DiagramError::Orientation(a));
        }

        let mut components = vec![];
        let mut comp_of = HashMap::new();
        for &a0 in count.keys() {
            if comp_of.contains_key(&a0) {
                continue;
            }
            let k = components.len();
            let mut comp = vec![];
            let mut a = a0;
            loop {
                comp.push(a);
                comp_of.insert(a, k);
                a = succ[&a];
                if a == a0 {
                    break;
                }
            }
            components.push(comp);
        }
        Ok(Self { crossings, components, free_loops, comp_of })
    }

    pub fn empty(free_loops: usize) -> Self {
        Self::from_crossings(vec![], free_loops).unwrap()
    }

    pub fn crossings(&self) -> &[Crossing] { &self.crossings }
    pub fn crossing(&self, i: usize) -> &Crossing { &self.crossings[i] }
    pub fn ncrossings(&self) -> usize { self.crossings.len() }

    /// Components that appear in the PD, in traversal order.
    pub fn components(&self) -> &[Vec<Arc>] { &self.components }
    pub fn free_loops(&self) -> usize { self.free_loops }

    /// Total number of components, free loops last.
    pub fn ncomponents(&self) -> usize { self.components.len() + self.free_loops }

    pub fn component_of(&self, a: Arc) -> usize { self.comp_of[&a] }

    pub fn is_knot(&self) -> bool { self.ncomponents() == 1 }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|x| x.sign as i64).sum()
    }

    /// Both ends of every arc.
    pub fn ends(&self) -> HashMap<Arc, [Corner; 2]> {
        let mut e: HashMap<Arc, Vec<Corner>> = HashMap::new();
        for (i, x) in self.crossings.iter().enumerate() {
            for (s, &a) in x.arcs.iter().enumerate() {
                e.entry(a).or_default().push((i, s));
            }
        }
        e.into_iter().map(|(a, v)| (a, [v[0], v[1]])).collect()
    }

    /// Faces as cyclic lists of corners. Starting at the corner between
    /// slots `s` and `s+1` of `x`, follow the arc at slot `s+1` to its other
    /// end `(y, t)`; the next corner is `(y, t)`.
    pub fn faces(&self) -> Vec<Vec<Corner>> {
        let ends = self.ends();
        let other = |i: usize, s: usize| {
            let [p, q] = ends[&self.crossings[i].arcs[s]];
            if p == (i, s) { q } else { p }
        };
        let mut seen = BTreeSet::new();
        let mut faces = vec![];
        for i in 0..self.crossings.len() {
            for s in 0..4 {
                if seen.contains(&(i, s)) {
                    continue;
                }
                let mut f = vec![];
                let mut c = (i, s);
                while seen.insert(c) {
                    f.push(c);
                    c = other(c.0, (c.1 + 1) % 4);
                }
                faces.push(f);
            }
        }
        faces
    }

    pub fn linking_matrix(&self) -> LinkingMatrix {
        let m = self.ncomponents();
        let mut e = vec![vec![0i64; m]; m];
        for x in &self.crossings {
            let (i, j) = (self.component_of(x.arcs[0]), self.component_of(x.arcs[1]));
            if i != j {
                e[i][j] += x.sign as i64;
                e[j][i] += x.sign as i64;
            }
        }
        for v in e.iter_mut().flatten() {
            debug_assert!(*v % 2 == 0);
            *v /= 2;
        }
        LinkingMatrix { entries: e }
    }

    pub fn is_algebraically_split(&self) -> bool {
        self.linking_matrix().is_zero()
    }

    /// Total pairwise linking number is even.
    pub fn is_proper(&self) -> bool {
        self.linking_matrix().off_diagonal_sum() % 2 == 0
    }

    /// Removes the given crossings. Each kept strand through a removed
    /// crossing is joined across it; components of `drop` vanish together
    /// with all their crossings. Kept components left without crossings
    /// become free loops.
    fn remove(&self, removed: &BTreeSet<usize>, drop: &BTreeSet<usize>) -> LinkDiagram {
        let mut uf: HashMap<Arc, Arc> = HashMap::new();
        fn find(uf: &mut HashMap<Arc, Arc>, a: Arc) -> Arc {
            let p = *uf.get(&a).unwrap_or(&a);
            if p == a {
                return a;
            }
            let r = find(uf, p);
            uf.insert(a, r);
            r
        }
        for &i in removed {
            let x = &self.crossings[i];
            for (s, t) in x.strands() {
                if drop.contains(&self.component_of(x.arcs[s])) {
                    continue;
                }
                let (p, q) = (find(&mut uf, x.arcs[s]), find(&mut uf, x.arcs[t]));
                if p != q {
                    uf.insert(p, q);
                }
            }
        }
        let kept: Vec<Crossing> = (0..self.crossings.len()).filter(|i| !removed.contains(i)).map(|i| {
            let x = &self.crossings[i];
            Crossing::new(x.arcs.map(|a| find(&mut uf, a)), x.sign)
        }).collect();

        let mut alive = BTreeSet::new();
        for x in &kept {
            alive.insert(self.component_of(x.arcs[0]));
            alive.insert(self.component_of(x.arcs[1]));
        }
        let lost = (0..self.components.len()).filter(|k| !drop.contains(k) && !alive.contains(k)).count();
        let free = (self.components.len()..self.ncomponents()).filter(|k| !drop.contains(k)).count();

        LinkDiagram::from_crossings(kept, lost + free).expect("removal keeps validity").relabeled()
    }

    /// Relabels arcs `1, 2, ...` consecutively along each component.
    /// Components are numbered in order of first appearance when reading
    /// crossings slot by slot, each starting at its first arc seen, so the
    /// result depends only on the crossing structure: diagrams equal up to
    /// relabeling have equal `relabeled()` forms.
    pub fn relabeled(&self) -> LinkDiagram {
        let mut map = HashMap::new();
        let mut n = 1;
        for x in &self.crossings {
            for &a0 in &x.arcs {
                if map.contains_key(&a0) {
                    continue;
                }
                let c = &self.components[self.component_of(a0)];
                let k = c.iter().position(|&a| a == a0).unwrap();
                for &a in c[k..].iter().chain(&c[..k]) {
                    map.insert(a, n);
                    n += 1;
                }
            }
        }
        let xs = self.crossings.iter().map(|x| Crossing::new(x.arcs.map(|a| map[&a]), x.sign)).collect();
        LinkDiagram::from_crossings(xs, self.free_loops).unwrap()
    }

    /// The sublink on the given component indices (free loops are indexed
    /// after the PD components).
    pub fn extract_sublink(&self, keep: &[usize]) -> Result<LinkDiagram, DiagramError> {
        if keep.is_empty() {
            return Err(DiagramError::EmptyKeep);
        }
        if let Some(&k) = keep.iter().find(|&&k| k >= self.ncomponents()) {
            return Err(DiagramError::ComponentIndex(k));
        }
        let drop: BTreeSet<usize> = (0..self.ncomponents()).filter(|k| !keep.contains(k)).collect();
        let removed = (0..self.crossings.len()).filter(|&i| {
            let x = &self.crossings[i];
            drop.contains(&self.component_of(x.arcs[0])) || drop.contains(&self.component_of(x.arcs[1]))
        }).collect();
        Ok(self.remove(&removed, &drop))
    }

    pub fn mirror(&self) -> LinkDiagram {
        let xs = self.crossings.iter().map(|x| x.mirror()).collect();
        LinkDiagram::from_crossings(xs, self.free_loops).unwrap()
    }

    /// Disjoint union; arcs of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &LinkDiagram) -> LinkDiagram {
        let off = self.comp_of.keys().max().copied().unwrap_or(0);
        let mut xs = self.crossings.clone();
        xs.extend(other.crossings.iter().map(|x| Crossing::new(x.arcs.map(|a| a + off), x.sign)));
        LinkDiagram::from_crossings(xs, self.free_loops + other.free_loops).unwrap()
    }

    fn r1_site(&self) -> Option<usize> {
        self.crossings.iter().position(|x| (0..4).any(|s| x.arcs[s] == x.arcs[(s + 1) % 4]))
    }

    fn r2_site(&self) -> Option<[usize; 2]> {
        for f in self.faces() {
            let [(i, s), (j, t)] = f[..] else { continue };
            if i == j {
                continue;
            }
            // edge i -> j leaves slot s+1, edge j -> i leaves slot t+1
            let o1 = (Crossing::is_over_slot((s + 1) % 4), Crossing::is_over_slot(t));
            let o2 = (Crossing::is_over_slot((t + 1) % 4), Crossing::is_over_slot(s));
            if o1.0 == o1.1 && o2.0 == o2.1 && o1.0 != o2.0 {
                return Some([i, j]);
            }
        }
        None
    }

    /// Greedy Reidemeister I/II reduction.
    pub fn simplify(&self) -> LinkDiagram {
        let mut d = self.clone();
        loop {
            let rm: BTreeSet<usize> = if let Some(i) = d.r1_site() {
                [i].into()
            } else if let Some(p) = d.r2_site() {
                p.into()
            } else {
                return d;
            };
            d = d.remove(&rm, &BTreeSet::new());
        }
    }

    fn triangle_faces(&self) -> Vec<Vec<Corner>> {
        self.faces().into_iter().filter(|f| {
            f.len() == 3 && f[0].0 != f[1].0 && f[1].0 != f[2].0 && f[0].0 != f[2].0
        }).collect()
    }

    /// Every edge of the triangle is over at exactly one end.
    fn is_template(f: &[Corner]) -> bool {
        (0..3).all(|k| {
            let ((_, s), (_, t)) = (f[k], f[(k + 1) % 3]);
            Crossing::is_over_slot((s + 1) % 4) != Crossing::is_over_slot(t)
        })
    }

    fn site_of(&self, f: &[Corner]) -> DeltaSite {
        DeltaSite {
            crossings: [f[0].0, f[1].0, f[2].0],
            triangle_arcs: [0, 1, 2].map(|k| self.crossings[f[k].0].arcs[(f[k].1 + 1) % 4]),
        }
    }

    pub fn delta_sites(&self) -> Vec<DeltaSite> {
        self.triangle_faces().iter().filter(|f| Self::is_template(f)).map(|f| self.site_of(f)).collect()
    }

    /// Locates the site on the given crossings (in any order).
    pub fn find_site(&self, ids: [usize; 3]) -> Result<DeltaSite, SiteError> {
        if let Some(&i) = ids.iter().find(|&&i| i >= self.crossings.len()) {
            return Err(SiteError::NoCrossing(i));
        }
        let mut want = ids;
        want.sort();
        let mut shape_ok = false;
        for f in self.triangle_faces() {
            let mut cs = [f[0].0, f[1].0, f[2].0];
            cs.sort();
            if cs != want {
                continue;
            }
            if Self::is_template(&f) {
                return Ok(self.site_of(&f));
            }
            shape_ok = true;
        }
        Err(if shape_ok { SiteError::Template(ids) } else { SiteError::NoTriangle(ids) })
    }

    /// Replaces the triangle by the opposite template: each strand meets
    /// its two site crossings in the opposite order, the over/under
    /// relation of every pair and all signs are kept.
    pub fn apply_delta_move(&self, site: &DeltaSite) -> Result<LinkDiagram, DiagramError> {
        let site = self.find_site(site.crossings)?;
        let ends = self.ends();
        let tri: BTreeSet<Arc> = site.triangle_arcs.into();
        let mut xs = self.crossings.clone();

        for &i in &site.crossings {
            let x = &self.crossings[i];
            for (si, so) in x.strands() {
                let a = x.arcs[so];
                if !tri.contains(&a) {
                    continue;
                }
                let [p, q] = ends[&a];
                let (j, t) = if p == (i, so) { q } else { p };
                if j == i || !site.crossings.contains(&j) {
                    continue;
                }
                let y = &self.crossings[j];
                let Some(&(_, tout)) = y.strands().iter().find(|(s, _)| *s == t) else { continue };
                let (ext1, ext2) = (x.arcs[si], y.arcs[tout]);
                xs[i].arcs[si] = a;
                xs[i].arcs[so] = ext2;
                xs[j].arcs[t] = ext1;
                xs[j].arcs[tout] = a;
            }
        }
        Ok(LinkDiagram::from_crossings(xs, self.free_loops)?.relabeled())
    }

    pub fn to_pd_string(&self) -> String {
        let small = |a: Arc| self.components[self.component_of(a)].len() <= 2;
        let items: Vec<_> = self.crossings.iter().map(|x| {
            let s = if x.arcs.iter().any(|&a| small(a)) {
                if x.sign > 0 { "+" } else { "-" }
            } else {
                ""
            };
            let [a, b, c, d] = x.arcs;
            format!("X{s}({a},{b},{c},{d})")
        }).collect();
        let body = items.join(",");
        match (self.free_loops, body.is_empty()) {
            (0, _) => body,
            (n, true) => format!("O*{n}"),
            (n, false) => format!("O*{n} {body}"),
        }
    }
}

impl Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_pd_string())
    }
}

impl FromStr for LinkDiagram {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pd(s)
    }
}

struct RawItem {
    arcs: [Arc; 4],
    sign: Option<i8>,
}

fn tokenize(text: &str) -> Result<(usize, Vec<RawItem>), DiagramError> {
    let src: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut i = 0;
    let pos = |i: usize| src.get(i).map(|p| p.0).unwrap_or(text.len());
    let err = |i: usize, m: &str| DiagramError::Parse { pos: pos(i), msg: m.to_string() };
    let peek = |i: usize| src.get(i).map(|p| p.1);

    let read_int = |i: &mut usize| -> Result<u32, DiagramError> {
        let st = *i;
        while peek(*i).is_some_and(|c| c.is_ascii_digit()) {
            *i += 1;
        }
        if st == *i {
            return Err(err(st, "expected integer"));
        }
        src[st..*i].iter().map(|p| p.1).collect::<String>().parse().map_err(|_| err(st, "integer out of range"))
    };

    let mut free = 0;
    if peek(i) == Some('O') {
        if peek(i + 1) != Some('*') {
            return Err(err(i + 1, "expected '*' after 'O'"));
        }
        i += 2;
        free = read_int(&mut i)? as usize;
        if peek(i) == Some(',') {
            i += 1;
        }
    }

    let mut items = vec![];
    while i < src.len() {
        if !items.is_empty() {
            if peek(i) != Some(',') {
                return Err(err(i, "expected ','"));
            }
            i += 1;
        }
        if peek(i) != Some('X') {
            return Err(err(i, "expected 'X'"));
        }
        i += 1;
        let sign = match peek(i) {
            Some('+') => { i += 1; Some(1) }
            Some('-') => { i += 1; Some(-1) }
            _ => None,
        };
        if peek(i) != Some('(') {
            return Err(err(i, "expected '('"));
        }
        i += 1;
        let mut arcs = [0; 4];
        for (k, a) in arcs.iter_mut().enumerate() {
            if k > 0 {
                if peek(i) != Some(',') {
                    return Err(err(i, "expected ','"));
                }
                i += 1;
            }
            *a = read_int(&mut i)?;
        }
        if peek(i) != Some(')') {
            return Err(err(i, "expected ')'"));
        }
        i += 1;
        items.push(RawItem { arcs, sign });
    }
    Ok((free, items))
}

/// Parses `pd := item ("," item)* | ""`, `item := "X" sign? "(" a,b,c,d ")"`,
/// with an optional `O*n` prefix for free loops.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    let (free, items) = tokenize(text)?;

    let mut count: BTreeMap<Arc, usize> = BTreeMap::new();
    for it in &items {
        for &a in &it.arcs {
            *count.entry(a).or_default() += 1;
        }
    }
    if let Some((&label, &count)) = count.iter().find(|(_, &c)| c != 2) {
        return Err(DiagramError::LabelCount { label, count });
    }

    // components: a~c, b~d
    let mut uf: BTreeMap<Arc, Arc> = count.keys().map(|&a| (a, a)).collect();
    fn find(uf: &mut BTreeMap<Arc, Arc>, a: Arc) -> Arc {
        let p = uf[&a];
        if p == a { a } else { let r = find(uf, p); uf.insert(a, r); r }
    }
    for it in &items {
        for (p, q) in [(it.arcs[0], it.arcs[2]), (it.arcs[1], it.arcs[3])] {
            let (p, q) = (find(&mut uf, p), find(&mut uf, q));
            uf.insert(p, q);
        }
    }
    let mut classes: BTreeMap<Arc, Vec<Arc>> = BTreeMap::new();
    for &a in count.keys() {
        let r = find(&mut uf, a);
        classes.entry(r).or_default().push(a); // ascending
    }
    let mut succ = HashMap::new();
    let mut size = HashMap::new();
    for c in classes.values() {
        for (k, &a) in c.iter().enumerate() {
            succ.insert(a, c[(k + 1) % c.len()]);
            size.insert(a, c.len());
        }
    }

    let mut xs = vec![];
    for (i, it) in items.iter().enumerate() {
        let [a, b, c, d] = it.arcs;
        if size[&a] > 2 && succ[&a] != c {
            return Err(DiagramError::Succession(i));
        }
        let sign = if size[&b] <= 2 {
            it.sign.ok_or(DiagramError::AmbiguousSign(i))?
        } else {
            let s = if succ[&d] == b {
                1
            } else if succ[&b] == d {
                -1
            } else {
                return Err(DiagramError::Succession(i));
            };
            if it.sign.is_some_and(|t| t != s) {
                return Err(DiagramError::SignMismatch(i));
            }
            s
        };
        xs.push(Crossing::new(it.arcs, sign));
    }
    LinkDiagram::from_crossings(xs, free)
}

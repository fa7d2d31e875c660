//! Virtual diagrams as signed Gauss codes.
//!
//! Virtual crossings and the planar embedding are not represented: a code
//! records, for every component, the cyclic sequence of real-crossing visits.
//! Each crossing is visited exactly twice, once by its positive strand and
//! once by its negative strand. The sign is the local chirality of the
//! crossing and decides which relation each semiarc enters (see
//! [`CrossingTransits::corners`]).
//!
//! Text form: components separated by `/`, visits separated by whitespace,
//! `a` for a positive visit and `a-` for a negative one, `o` for a
//! crossing-free loop. Lines starting with `#` are ignored.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Visit {
    pub crossing: usize,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("empty Gauss code")]
    Empty,
    #[error("component {0} has no visits (use 'o' for a crossing-free loop)")]
    EmptyComponent(usize),
    #[error("invalid token {0:?}")]
    BadToken(String),
    #[error("crossing '{symbol}' occurs {count} time(s), expected exactly 2")]
    Occurrences { symbol: String, count: usize },
    #[error("both visits of crossing '{0}' carry the same sign")]
    SameSign(String),
}

/// Where a visit sits: component index and position inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub component: usize,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussCode {
    components: Vec<Vec<Visit>>,
    labels: Vec<String>,
}

/// Whether `s` is usable as a crossing label.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "o"
}

/// Label for the `i`-th crossing in canonical naming: `a`, `b`, ... `z`
/// (skipping `o`), then `aa`, `ab`, ...
pub fn generated_label(mut i: usize) -> String {
    const ALPHABET: &[u8] = b"abcdefghijklmnpqrstuvwxyz";
    let base = ALPHABET.len();
    let mut out = Vec::new();
    loop {
        out.push(ALPHABET[i % base]);
        if i < base {
            break;
        }
        i = i / base - 1;
    }
    out.reverse();
    String::from_utf8(out).unwrap()
}

impl GaussCode {
    /// Builds a code from labelled visits, validating the double-occurrence
    /// and opposite-sign invariants.
    pub fn from_labelled(components: Vec<Vec<(String, Sign)>>) -> Result<Self, GaussError> {
        if components.is_empty() {
            return Err(GaussError::Empty);
        }
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut labels = Vec::new();
        let mut seen: Vec<Vec<Sign>> = Vec::new();
        let mut out = Vec::with_capacity(components.len());
        for comp in components {
            let mut visits = Vec::with_capacity(comp.len());
            for (label, sign) in comp {
                if !is_identifier(&label) {
                    return Err(GaussError::BadToken(label));
                }
                let id = *ids.entry(label.clone()).or_insert_with(|| {
                    labels.push(label.clone());
                    seen.push(Vec::new());
                    labels.len() - 1
                });
                seen[id].push(sign);
                visits.push(Visit { crossing: id, sign });
            }
            out.push(visits);
        }
        for (id, signs) in seen.iter().enumerate() {
            if signs.len() != 2 {
                return Err(GaussError::Occurrences {
                    symbol: labels[id].clone(),
                    count: signs.len(),
                });
            }
            if signs[0] == signs[1] {
                return Err(GaussError::SameSign(labels[id].clone()));
            }
        }
        Ok(GaussCode {
            components: out,
            labels,
        })
    }

    /// Internal constructor for codes produced by trusted rewrites.
    pub(crate) fn from_parts(components: Vec<Vec<Visit>>, labels: Vec<String>) -> Self {
        let code = GaussCode { components, labels };
        debug_assert!(code.check_invariants(), "invalid code {code}");
        code
    }

    pub fn parse(text: &str) -> Result<Self, GaussError> {
        let body: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.starts_with('#')).collect();
        let body = body.join(" ");
        if body.trim().is_empty() {
            return Err(GaussError::Empty);
        }
        let mut components = Vec::new();
        for (i, piece) in body.split('/').enumerate() {
            let tokens: Vec<&str> = piece.split_whitespace().collect();
            match tokens.as_slice() {
                [] => return Err(GaussError::EmptyComponent(i)),
                ["o"] => components.push(Vec::new()),
                _ => {
                    let comp = tokens
                        .iter()
                        .map(|tok| match tok.strip_suffix('-') {
                            Some(name) => (name.to_string(), Sign::Neg),
                            None => (tok.to_string(), Sign::Pos),
                        })
                        .collect();
                    components.push(comp);
                }
            }
        }
        Self::from_labelled(components)
    }

    /// The unknot: a single crossing-free loop.
    pub fn unknot() -> Self {
        GaussCode {
            components: vec![Vec::new()],
            labels: Vec::new(),
        }
    }

    pub fn components(&self) -> &[Vec<Visit>] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn crossing_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, crossing: usize) -> &str {
        &self.labels[crossing]
    }

    pub fn crossing_id(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn visit(&self, site: Site) -> Visit {
        self.components[site.component][site.position]
    }

    /// Sites of the positive and negative visit of every crossing, indexed by
    /// crossing id.
    pub fn occurrences(&self) -> Vec<[Site; 2]> {
        let dummy = Site {
            component: usize::MAX,
            position: usize::MAX,
        };
        let mut occ = vec![[dummy; 2]; self.crossing_count()];
        for (c, comp) in self.components.iter().enumerate() {
            for (p, v) in comp.iter().enumerate() {
                let slot = match v.sign {
                    Sign::Pos => 0,
                    Sign::Neg => 1,
                };
                occ[v.crossing][slot] = Site {
                    component: c,
                    position: p,
                };
            }
        }
        occ
    }

    /// First generated label not already in use.
    pub fn fresh_label(&self) -> String {
        self.fresh_labels(1).pop().unwrap()
    }

    pub fn fresh_labels(&self, count: usize) -> Vec<String> {
        (0..)
            .map(generated_label)
            .filter(|l| !self.labels.contains(l))
            .take(count)
            .collect()
    }

    fn check_invariants(&self) -> bool {
        let mut signs = vec![Vec::new(); self.labels.len()];
        for v in self.components.iter().flatten() {
            match signs.get_mut(v.crossing) {
                Some(s) => s.push(v.sign),
                None => return false,
            }
        }
        !self.components.is_empty()
            && signs.iter().all(|s| s.len() == 2 && s[0] != s[1])
            && self.labels.iter().all(|l| is_identifier(l))
    }

    pub fn semiarc_count(&self) -> usize {
        self.components.iter().map(|c| c.len().max(1)).sum()
    }

    /// First semiarc id of each component.
    fn semiarc_bases(&self) -> Vec<usize> {
        let mut base = 0;
        self.components
            .iter()
            .map(|c| {
                let b = base;
                base += c.len().max(1);
                b
            })
            .collect()
    }

    /// Semiarc `base + i` of a component leaves visit `i` and enters visit
    /// `i + 1` (cyclically). A crossing-free component is a single semiarc.
    pub fn semiarcs(&self) -> Vec<Semiarc> {
        let bases = self.semiarc_bases();
        let mut out = Vec::with_capacity(self.semiarc_count());
        for (c, comp) in self.components.iter().enumerate() {
            let k = comp.len();
            if k == 0 {
                out.push(Semiarc {
                    id: bases[c],
                    component: c,
                    span: Span::Loop,
                });
            }
            for i in 0..k {
                out.push(Semiarc {
                    id: bases[c] + i,
                    component: c,
                    span: Span::Between {
                        from: i,
                        to: (i + 1) % k,
                    },
                });
            }
        }
        out
    }

    /// Semiarcs entering and leaving each crossing, indexed by crossing id.
    pub fn crossings(&self) -> Vec<CrossingTransits> {
        let bases = self.semiarc_bases();
        let mut partial: Vec<Vec<(Sign, Transit)>> = vec![Vec::new(); self.crossing_count()];
        for (c, comp) in self.components.iter().enumerate() {
            let k = comp.len();
            for (i, v) in comp.iter().enumerate() {
                let transit = Transit {
                    incoming: bases[c] + (i + k - 1) % k,
                    outgoing: bases[c] + i,
                };
                partial[v.crossing].push((v.sign, transit));
            }
        }
        partial
            .into_iter()
            .enumerate()
            .map(|(crossing, t)| CrossingTransits {
                crossing,
                transit1: t[0].1,
                transit2: t[1].1,
                transit1_sign: t[0].0,
            })
            .collect()
    }

    /// Concatenates the components of `other` after those of `self`, renaming
    /// any clashing crossing labels of `other`.
    pub fn disjoint_union(&self, other: &GaussCode) -> GaussCode {
        let offset = self.crossing_count();
        let mut labels = self.labels.clone();
        let mut fresh = (0..).map(generated_label);
        for l in &other.labels {
            if labels.contains(l) || other.labels.iter().filter(|x| *x == l).count() > 1 {
                let name = fresh
                    .by_ref()
                    .find(|c| !labels.contains(c) && !other.labels.contains(c))
                    .unwrap();
                labels.push(name);
            } else {
                labels.push(l.clone());
            }
        }
        let mut components = self.components.clone();
        components.extend(other.components.iter().map(|comp| {
            comp.iter()
                .map(|v| Visit {
                    crossing: v.crossing + offset,
                    sign: v.sign,
                })
                .collect()
        }));
        GaussCode::from_parts(components, labels)
    }

    /// The code with component `index` traversed backwards. A crossing shared
    /// with another component changes chirality, so both its signs flip.
    pub fn reversed_component(&self, index: usize) -> GaussCode {
        let mut components = self.components.clone();
        components[index].reverse();
        let mut on_reversed = vec![0usize; self.crossing_count()];
        for v in &components[index] {
            on_reversed[v.crossing] += 1;
        }
        for v in components.iter_mut().flatten() {
            if on_reversed[v.crossing] == 1 {
                v.sign = v.sign.flip();
            }
        }
        GaussCode::from_parts(components, self.labels.clone())
    }

    /// Minimal representative under cyclic rotation of each component,
    /// reordering of components and relabelling of crossings in first-visit
    /// order. Longer components come first; crossing-free loops last.
    pub fn canonical_form(&self) -> GaussCode {
        let mut best: Option<Vec<Vec<u32>>> = None;
        let mut remaining: Vec<usize> = (0..self.components.len()).collect();
        let mut relabel = vec![u32::MAX; self.crossing_count()];
        let mut prefix = Vec::new();
        self.canonical_search(&mut remaining, &mut relabel, 0, &mut prefix, &mut best);
        let best = best.unwrap();

        let n = self.crossing_count();
        let labels: Vec<String> = (0..n).map(generated_label).collect();
        let components = best
            .iter()
            .map(|key| {
                key[1..]
                    .iter()
                    .map(|&tok| Visit {
                        crossing: (tok / 2) as usize,
                        sign: if tok % 2 == 0 { Sign::Pos } else { Sign::Neg },
                    })
                    .collect()
            })
            .collect();
        GaussCode::from_parts(components, labels)
    }

    /// Encodes a rotated component under a partial relabelling, extending it.
    fn encode(comp: &[Visit], start: usize, relabel: &mut [u32], next: &mut u32) -> Vec<u32> {
        let k = comp.len();
        let mut key = Vec::with_capacity(k + 1);
        key.push(u32::MAX - k as u32);
        for i in 0..k {
            let v = comp[(start + i) % k];
            if relabel[v.crossing] == u32::MAX {
                relabel[v.crossing] = *next;
                *next += 1;
            }
            key.push(relabel[v.crossing] * 2 + u32::from(v.sign == Sign::Neg));
        }
        key
    }

    fn canonical_search(
        &self,
        remaining: &mut Vec<usize>,
        relabel: &mut [u32],
        next: u32,
        prefix: &mut Vec<Vec<u32>>,
        best: &mut Option<Vec<Vec<u32>>>,
    ) {
        if remaining.is_empty() {
            if best.as_ref().is_none_or(|b| &*prefix < b) {
                *best = Some(prefix.clone());
            }
            return;
        }
        // all (component, rotation) choices for the next slot; keep the minimal keys
        let mut candidates: Vec<(Vec<u32>, usize, usize)> = Vec::new();
        for (slot, &c) in remaining.iter().enumerate() {
            let comp = &self.components[c];
            for start in 0..comp.len().max(1) {
                let mut scratch = relabel.to_vec();
                let mut n = next;
                let key = Self::encode(comp, start, &mut scratch, &mut n);
                candidates.push((key, slot, start));
            }
        }
        let min = candidates.iter().map(|c| &c.0).min().unwrap().clone();
        if let Some(b) = best.as_ref() {
            // prune when this level already exceeds the best code
            let depth = prefix.len();
            if b[..depth] == prefix[..] && b[depth] < min {
                return;
            }
        }
        for (key, slot, start) in candidates.into_iter().filter(|c| c.0 == min) {
            let c = remaining.remove(slot);
            let mut scratch = relabel.to_vec();
            let mut n = next;
            Self::encode(&self.components[c], start, &mut scratch, &mut n);
            prefix.push(key);
            self.canonical_search(remaining, &mut scratch, n, prefix, best);
            prefix.pop();
            remaining.insert(slot, c);
        }
    }

    /// Random code with `crossings` crossings spread over `components`
    /// components. Components may come out crossing-free.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, crossings: usize, components: usize) -> GaussCode {
        assert!(components >= 1);
        let mut visits: Vec<Visit> = (0..crossings)
            .flat_map(|c| {
                [
                    Visit {
                        crossing: c,
                        sign: Sign::Pos,
                    },
                    Visit {
                        crossing: c,
                        sign: Sign::Neg,
                    },
                ]
            })
            .collect();
        visits.shuffle(rng);
        let mut cuts: Vec<usize> = (0..components - 1).map(|_| rng.gen_range(0..=visits.len())).collect();
        cuts.sort_unstable();
        let mut comps = Vec::with_capacity(components);
        let mut start = 0;
        for cut in cuts.into_iter().chain([visits.len()]) {
            comps.push(visits[start..cut].to_vec());
            start = cut;
        }
        // relabel so crossing ids follow first appearance
        let mut order = vec![usize::MAX; crossings];
        let mut next = 0;
        for v in comps.iter_mut().flatten() {
            if order[v.crossing] == usize::MAX {
                order[v.crossing] = next;
                next += 1;
            }
            v.crossing = order[v.crossing];
        }
        GaussCode::from_parts(comps, (0..crossings).map(generated_label).collect())
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, comp) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" / ")?;
            }
            if comp.is_empty() {
                f.write_str("o")?;
            }
            for (j, v) in comp.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(&self.labels[v.crossing])?;
                if v.sign == Sign::Neg {
                    f.write_str("-")?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for GaussCode {
    type Err = GaussError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GaussCode::parse(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Span {
    /// From the visit at position `from` to the visit at position `to`.
    Between { from: usize, to: usize },
    /// A crossing-free component.
    Loop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Semiarc {
    pub id: usize,
    pub component: usize,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transit {
    pub incoming: usize,
    pub outgoing: usize,
}

/// The two passages through a crossing, in traversal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingTransits {
    pub crossing: usize,
    pub transit1: Transit,
    pub transit2: Transit,
    pub transit1_sign: Sign,
}

/// The four semiarcs around a crossing. The positive strand runs `a → d`,
/// the negative strand `c → b`, and the crossing relates them through
/// `S(a, b) = (c, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corners {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl CrossingTransits {
    pub fn positive(&self) -> Transit {
        match self.transit1_sign {
            Sign::Pos => self.transit1,
            Sign::Neg => self.transit2,
        }
    }

    pub fn negative(&self) -> Transit {
        match self.transit1_sign {
            Sign::Pos => self.transit2,
            Sign::Neg => self.transit1,
        }
    }

    pub fn corners(&self) -> Corners {
        let (p, n) = (self.positive(), self.negative());
        Corners {
            a: p.incoming,
            d: p.outgoing,
            c: n.incoming,
            b: n.outgoing,
        }
    }
}

//! R1 and R2 rewrites on Gauss codes and seeded random move walks.
//!
//! Virtual moves act trivially on Gauss codes, so only the two real moves
//! are modelled. A kink is a pair of cyclically adjacent visits `s s-` (or
//! `s- s`). An R2 bigon is two blocks of adjacent visits: `v w-` together
//! with `v- w` (parallel strands) or `w v-` (antiparallel strands), up to
//! swapping every sign.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{is_identifier, GaussCode, Sign, Site, Visit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("no component {0}")]
    NoSuchComponent(usize),
    #[error("position {position} is outside component {component} of length {len}")]
    PositionOutOfRange {
        component: usize,
        position: usize,
        len: usize,
    },
    #[error("unknown crossing '{0}'")]
    UnknownSymbol(String),
    #[error("crossing label '{0}' is already in use or invalid")]
    LabelUnavailable(String),
    #[error("move not applicable: {0}")]
    NotApplicable(String),
    #[error("cannot parse move event {0:?}")]
    BadEvent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum R2Variant {
    Parallel,
    Antiparallel,
}

impl fmt::Display for R2Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            R2Variant::Parallel => "parallel",
            R2Variant::Antiparallel => "antiparallel",
        })
    }
}

/// One applied move. Symbol fields carry the sign of the first inserted
/// visit, written as in the Gauss code grammar (`v` or `v-`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MoveEvent {
    R1Insert {
        site: Site,
        symbol: String,
        sign: Sign,
    },
    R1Delete {
        symbol: String,
    },
    R2Insert {
        first: Site,
        second: Site,
        variant: R2Variant,
        v: String,
        w: String,
        sign: Sign,
    },
    R2Delete {
        v: String,
        w: String,
    },
}

fn signed(symbol: &str, sign: Sign) -> String {
    match sign {
        Sign::Pos => symbol.to_string(),
        Sign::Neg => format!("{symbol}-"),
    }
}

fn unsigned(token: &str) -> (String, Sign) {
    match token.strip_suffix('-') {
        Some(s) => (s.to_string(), Sign::Neg),
        None => (token.to_string(), Sign::Pos),
    }
}

impl fmt::Display for MoveEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveEvent::R1Insert { site, symbol, sign } => {
                write!(f, "R1+ {} {} {}", site.component, site.position, signed(symbol, *sign))
            }
            MoveEvent::R1Delete { symbol } => write!(f, "R1- {symbol}"),
            MoveEvent::R2Insert {
                first,
                second,
                variant,
                v,
                w,
                sign,
            } => write!(
                f,
                "R2+ {} {} {} {} {variant} {} {}",
                first.component,
                first.position,
                second.component,
                second.position,
                signed(v, *sign),
                signed(w, sign.flip())
            ),
            MoveEvent::R2Delete { v, w } => write!(f, "R2- {v} {w}"),
        }
    }
}

impl FromStr for MoveEvent {
    type Err = MoveError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let bad = || MoveError::BadEvent(line.to_string());
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match tokens.as_slice() {
            ["R1+", c, p, sym] => {
                let (symbol, sign) = unsigned(sym);
                Ok(MoveEvent::R1Insert {
                    site: Site {
                        component: num(c)?,
                        position: num(p)?,
                    },
                    symbol,
                    sign,
                })
            }
            ["R1-", sym] => Ok(MoveEvent::R1Delete {
                symbol: sym.to_string(),
            }),
            ["R2+", c1, p1, c2, p2, variant, v, w] => {
                let variant = match *variant {
                    "parallel" => R2Variant::Parallel,
                    "antiparallel" => R2Variant::Antiparallel,
                    _ => return Err(bad()),
                };
                let (v, sign) = unsigned(v);
                let (w, w_sign) = unsigned(w);
                if w_sign != sign.flip() {
                    return Err(bad());
                }
                Ok(MoveEvent::R2Insert {
                    first: Site {
                        component: num(c1)?,
                        position: num(p1)?,
                    },
                    second: Site {
                        component: num(c2)?,
                        position: num(p2)?,
                    },
                    variant,
                    v,
                    w,
                    sign,
                })
            }
            ["R2-", v, w] => Ok(MoveEvent::R2Delete {
                v: v.to_string(),
                w: w.to_string(),
            }),
            _ => Err(bad()),
        }
    }
}

impl MoveEvent {
    pub fn apply(&self, code: &GaussCode) -> Result<GaussCode, MoveError> {
        match self {
            MoveEvent::R1Insert { site, symbol, sign } => r1_insert(code, *site, symbol, *sign),
            MoveEvent::R1Delete { symbol } => r1_delete(code, symbol),
            MoveEvent::R2Insert {
                first,
                second,
                variant,
                v,
                w,
                sign,
            } => r2_insert(code, *first, *second, *variant, (v, w), *sign),
            MoveEvent::R2Delete { v, w } => r2_delete(code, v, w),
        }
    }

    /// The event undoing `self` when applied to `self.apply(before)`. Undoing
    /// a deletion restores `before` up to [`GaussCode::canonical_form`].
    pub fn inverse(&self, before: &GaussCode) -> Result<MoveEvent, MoveError> {
        match self {
            MoveEvent::R1Insert { symbol, .. } => Ok(MoveEvent::R1Delete { symbol: symbol.clone() }),
            MoveEvent::R2Insert { v, w, .. } => Ok(MoveEvent::R2Delete {
                v: v.clone(),
                w: w.clone(),
            }),
            MoveEvent::R1Delete { symbol } => {
                let id = lookup(before, symbol)?;
                let start = kink_start(before, id).ok_or_else(|| not_kink(symbol))?;
                let sign = before.visit(start).sign;
                Ok(MoveEvent::R1Insert {
                    site: site_after_removal(before, start, &[id]),
                    symbol: symbol.clone(),
                    sign,
                })
            }
            MoveEvent::R2Delete { v, w } => {
                let (vi, wi) = (lookup(before, v)?, lookup(before, w)?);
                let bigon = find_bigon(before, vi, wi).ok_or_else(|| not_bigon(v, w))?;
                let (v, w) = if bigon.v_first { (v, w) } else { (w, v) };
                Ok(MoveEvent::R2Insert {
                    first: site_after_removal(before, bigon.first, &[vi, wi]),
                    second: site_after_removal(before, bigon.second, &[vi, wi]),
                    variant: bigon.variant,
                    v: v.clone(),
                    w: w.clone(),
                    sign: bigon.sign,
                })
            }
        }
    }
}

fn lookup(code: &GaussCode, symbol: &str) -> Result<usize, MoveError> {
    code.crossing_id(symbol)
        .ok_or_else(|| MoveError::UnknownSymbol(symbol.to_string()))
}

fn not_kink(symbol: &str) -> MoveError {
    MoveError::NotApplicable(format!("the visits of '{symbol}' are not adjacent"))
}

fn not_bigon(v: &str, w: &str) -> MoveError {
    MoveError::NotApplicable(format!("'{v}' and '{w}' do not form a bigon"))
}

/// Position a block starting at `start` would be re-inserted at once the
/// crossings in `removed` are gone.
fn site_after_removal(code: &GaussCode, start: Site, removed: &[usize]) -> Site {
    let comp = &code.components()[start.component];
    let position = comp[..start.position]
        .iter()
        .filter(|v| !removed.contains(&v.crossing))
        .count();
    Site {
        component: start.component,
        position,
    }
}

fn check_site(code: &GaussCode, site: Site) -> Result<(), MoveError> {
    let comp = code
        .components()
        .get(site.component)
        .ok_or(MoveError::NoSuchComponent(site.component))?;
    if site.position > comp.len() {
        return Err(MoveError::PositionOutOfRange {
            component: site.component,
            position: site.position,
            len: comp.len(),
        });
    }
    Ok(())
}

fn check_fresh(code: &GaussCode, symbol: &str) -> Result<(), MoveError> {
    if !is_identifier(symbol) || code.crossing_id(symbol).is_some() {
        return Err(MoveError::LabelUnavailable(symbol.to_string()));
    }
    Ok(())
}

/// Splices the kink `s s-` (for `sign = Pos`) or `s- s` at `site`.
pub fn r1_insert(code: &GaussCode, site: Site, symbol: &str, sign: Sign) -> Result<GaussCode, MoveError> {
    check_site(code, site)?;
    check_fresh(code, symbol)?;
    let id = code.crossing_count();
    let mut components = code.components().to_vec();
    let kink = [
        Visit { crossing: id, sign },
        Visit {
            crossing: id,
            sign: sign.flip(),
        },
    ];
    components[site.component].splice(site.position..site.position, kink);
    let mut labels = code.labels().to_vec();
    labels.push(symbol.to_string());
    Ok(GaussCode::from_parts(components, labels))
}

/// Start of the kink formed by crossing `id`, if its visits are cyclically
/// adjacent on one component.
fn kink_start(code: &GaussCode, id: usize) -> Option<Site> {
    let [p, n] = code.occurrences()[id];
    if p.component != n.component {
        return None;
    }
    let k = code.components()[p.component].len();
    if (p.position + 1) % k == n.position {
        Some(p)
    } else if (n.position + 1) % k == p.position {
        Some(n)
    } else {
        None
    }
}

/// Drops the given crossings from a code and compacts the crossing ids.
fn remove_crossings(code: &GaussCode, removed: &[usize]) -> GaussCode {
    let keep: Vec<usize> = (0..code.crossing_count()).filter(|c| !removed.contains(c)).collect();
    let mut new_id = vec![usize::MAX; code.crossing_count()];
    for (i, &c) in keep.iter().enumerate() {
        new_id[c] = i;
    }
    let components = code
        .components()
        .iter()
        .map(|comp| {
            comp.iter()
                .filter(|v| !removed.contains(&v.crossing))
                .map(|v| Visit {
                    crossing: new_id[v.crossing],
                    sign: v.sign,
                })
                .collect()
        })
        .collect();
    let labels = keep.iter().map(|&c| code.label(c).to_string()).collect();
    GaussCode::from_parts(components, labels)
}

pub fn r1_delete(code: &GaussCode, symbol: &str) -> Result<GaussCode, MoveError> {
    let id = lookup(code, symbol)?;
    kink_start(code, id).ok_or_else(|| not_kink(symbol))?;
    Ok(remove_crossings(code, &[id]))
}

/// Inserts an R2 bigon. Strand one receives `v w-` at `first` (for
/// `sign = Pos`); strand two receives `v- w` (parallel) or `w v-`
/// (antiparallel) at `second`. Positions refer to `code`; when both sites
/// coincide the first block goes first.
pub fn r2_insert(
    code: &GaussCode,
    first: Site,
    second: Site,
    variant: R2Variant,
    (v, w): (&str, &str),
    sign: Sign,
) -> Result<GaussCode, MoveError> {
    check_site(code, first)?;
    check_site(code, second)?;
    check_fresh(code, v)?;
    check_fresh(code, w)?;
    if v == w {
        return Err(MoveError::LabelUnavailable(w.to_string()));
    }
    let (vi, wi) = (code.crossing_count(), code.crossing_count() + 1);
    let visit = |crossing, sign| Visit { crossing, sign };
    let block1 = [visit(vi, sign), visit(wi, sign.flip())];
    let block2 = match variant {
        R2Variant::Parallel => [visit(vi, sign.flip()), visit(wi, sign)],
        R2Variant::Antiparallel => [visit(wi, sign), visit(vi, sign.flip())],
    };
    let mut components = code.components().to_vec();
    if first.component == second.component && second.position >= first.position {
        let comp = &mut components[first.component];
        comp.splice(second.position..second.position, block2);
        comp.splice(first.position..first.position, block1);
    } else {
        components[first.component].splice(first.position..first.position, block1);
        components[second.component].splice(second.position..second.position, block2);
    }
    let mut labels = code.labels().to_vec();
    labels.push(v.to_string());
    labels.push(w.to_string());
    Ok(GaussCode::from_parts(components, labels))
}

struct Bigon {
    first: Site,
    second: Site,
    variant: R2Variant,
    /// whether the first block starts with `v`
    v_first: bool,
    /// sign of the first visit of the first block
    sign: Sign,
}

/// Finds two cyclically adjacent blocks, each made of one visit of `v` and
/// one of `w` with opposite signs.
fn find_bigon(code: &GaussCode, v: usize, w: usize) -> Option<Bigon> {
    if v == w {
        return None;
    }
    let occ = code.occurrences();
    let next = |s: Site| {
        let k = code.components()[s.component].len();
        Site {
            component: s.component,
            position: (s.position + 1) % k,
        }
    };
    // a block is (start, end) with end = next(start)
    let mut blocks: Vec<(Site, Site)> = Vec::new();
    for &sv in &occ[v] {
        for &sw in &occ[w] {
            if sv.component != sw.component {
                continue;
            }
            if next(sv) == sw {
                blocks.push((sv, sw));
            }
            if next(sw) == sv {
                blocks.push((sw, sv));
            }
        }
    }
    for (i, &b1) in blocks.iter().enumerate() {
        for &b2 in &blocks[i + 1..] {
            let sites = [b1.0, b1.1, b2.0, b2.1];
            let distinct = (0..4).all(|x| (x + 1..4).all(|y| sites[x] != sites[y]));
            if !distinct {
                continue;
            }
            let (x1, x2) = (code.visit(b1.0), code.visit(b2.0));
            if x1.sign == code.visit(b1.1).sign {
                continue;
            }
            let variant = if x1.crossing == x2.crossing {
                R2Variant::Parallel
            } else {
                R2Variant::Antiparallel
            };
            let (first, second) = if b1.0 <= b2.0 { (b1, b2) } else { (b2, b1) };
            let lead = code.visit(first.0);
            return Some(Bigon {
                first: first.0,
                second: second.0,
                variant,
                v_first: lead.crossing == v,
                sign: lead.sign,
            });
        }
    }
    None
}

pub fn r2_delete(code: &GaussCode, v: &str, w: &str) -> Result<GaussCode, MoveError> {
    let (vi, wi) = (lookup(code, v)?, lookup(code, w)?);
    find_bigon(code, vi, wi).ok_or_else(|| not_bigon(v, w))?;
    Ok(remove_crossings(code, &[vi, wi]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkConfig {
    /// Insertions that would exceed this many crossings are not offered.
    pub max_crossings: usize,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig { max_crossings: 12 }
    }
}

/// Insertion sites: one per gap between consecutive visits, and a single one
/// on a crossing-free component.
fn sites(code: &GaussCode) -> Vec<Site> {
    code.components()
        .iter()
        .enumerate()
        .flat_map(|(c, comp)| {
            (0..comp.len().max(1)).map(move |p| Site {
                component: c,
                position: p,
            })
        })
        .collect()
}

/// Every move applicable to `code` under `config`, in a fixed order.
pub fn applicable_moves(code: &GaussCode, config: &WalkConfig) -> Vec<MoveEvent> {
    let mut out = Vec::new();
    let k = code.crossing_count();
    let all_sites = sites(code);
    let fresh = code.fresh_labels(2);
    let signs = [Sign::Pos, Sign::Neg];
    if k < config.max_crossings {
        for &site in &all_sites {
            for sign in signs {
                out.push(MoveEvent::R1Insert {
                    site,
                    symbol: fresh[0].clone(),
                    sign,
                });
            }
        }
    }
    for id in 0..k {
        if kink_start(code, id).is_some() {
            out.push(MoveEvent::R1Delete {
                symbol: code.label(id).to_string(),
            });
        }
    }
    if k + 2 <= config.max_crossings {
        for &first in &all_sites {
            for &second in &all_sites {
                for variant in [R2Variant::Parallel, R2Variant::Antiparallel] {
                    for sign in signs {
                        out.push(MoveEvent::R2Insert {
                            first,
                            second,
                            variant,
                            v: fresh[0].clone(),
                            w: fresh[1].clone(),
                            sign,
                        });
                    }
                }
            }
        }
    }
    for v in 0..k {
        for w in v + 1..k {
            if find_bigon(code, v, w).is_some() {
                out.push(MoveEvent::R2Delete {
                    v: code.label(v).to_string(),
                    w: code.label(w).to_string(),
                });
            }
        }
    }
    out
}

/// Applies `steps` moves, each drawn uniformly from the applicable ones,
/// using a ChaCha8 generator seeded with `seed`. Returns the canonical form
/// of the final code and the event log, which replays from `code`.
pub fn random_walk(code: &GaussCode, steps: usize, seed: u64, config: &WalkConfig) -> (GaussCode, Vec<MoveEvent>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = code.clone();
    let mut events = Vec::with_capacity(steps);
    for _ in 0..steps {
        let moves = applicable_moves(&current, config);
        if moves.is_empty() {
            break;
        }
        let event = moves[rng.gen_range(0..moves.len())].clone();
        current = event.apply(&current).expect("enumerated moves apply");
        events.push(event);
    }
    (current.canonical_form(), events)
}

/// Applies a logged walk to `code`.
pub fn replay(code: &GaussCode, events: &[MoveEvent]) -> Result<GaussCode, MoveError> {
    events.iter().try_fold(code.clone(), |c, e| e.apply(&c))
}

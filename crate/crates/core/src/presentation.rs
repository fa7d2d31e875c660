//! Fundamental and doubled fundamental switch presentations, and counting
//! their homomorphisms into a finite switch.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::diagram::GaussCode;
use crate::switch::FiniteDoodleSwitch;

/// `lhs = left · right`, all three being generator indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    pub lhs: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("relation {relation} references generator {generator}, but only {count} are declared")]
    UnknownGenerator {
        relation: usize,
        generator: usize,
        count: usize,
    },
    #[error("{count} colorings exceed the listing cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error("brute force would scan {order}^{generators} assignments, above the guard of {guard}")]
    GuardExceeded {
        order: usize,
        generators: usize,
        guard: u128,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchPresentation {
    generators: Vec<String>,
    relations: Vec<Relation>,
}

impl SwitchPresentation {
    pub fn new(generators: Vec<String>, relations: Vec<Relation>) -> Result<Self, PresentationError> {
        let count = generators.len();
        for (i, r) in relations.iter().enumerate() {
            for g in [r.lhs, r.left, r.right] {
                if g >= count {
                    return Err(PresentationError::UnknownGenerator {
                        relation: i,
                        generator: g,
                        count,
                    });
                }
            }
        }
        Ok(SwitchPresentation { generators, relations })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Relations as a set, for comparisons that ignore order and repeats.
    pub fn relation_set(&self) -> HashSet<Relation> {
        self.relations.iter().copied().collect()
    }

    /// Repeatedly drops a generator that is the left-hand side of exactly one
    /// relation and occurs nowhere else, together with that relation.
    /// Duplicate relations are merged first. Coloring counts are unchanged.
    pub fn simplify(&self) -> SwitchPresentation {
        let mut generators = self.generators.clone();
        let mut relations: Vec<Relation> = Vec::new();
        for r in &self.relations {
            if !relations.contains(r) {
                relations.push(*r);
            }
        }
        loop {
            let mut as_lhs = vec![0usize; generators.len()];
            let mut elsewhere = vec![0usize; generators.len()];
            for r in &relations {
                as_lhs[r.lhs] += 1;
                elsewhere[r.left] += 1;
                elsewhere[r.right] += 1;
            }
            let Some(g) = (0..generators.len()).find(|&g| as_lhs[g] == 1 && elsewhere[g] == 0) else {
                break;
            };
            relations.retain(|r| r.lhs != g);
            generators.remove(g);
            let shift = |x: usize| if x > g { x - 1 } else { x };
            for r in &mut relations {
                *r = Relation {
                    lhs: shift(r.lhs),
                    left: shift(r.left),
                    right: shift(r.right),
                };
            }
        }
        SwitchPresentation { generators, relations }
    }
}

impl fmt::Display for SwitchPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} |", self.generators.join(", "))?;
        for (i, r) in self.relations.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            let g = &self.generators;
            write!(f, "{sep}{} = {}·{}", g[r.lhs], g[r.left], g[r.right])?;
        }
        f.write_str(" >")
    }
}

/// Generator name of semiarc `id`.
pub fn semiarc_name(id: usize) -> String {
    format!("s{id}")
}

/// One generator per semiarc. Around a crossing with corners `a, b, c, d`
/// (positive strand `a → d`, negative strand `c → b`) the relations are
/// `c = b · a` and `d = a · b`.
pub fn fds(code: &GaussCode) -> SwitchPresentation {
    let generators = (0..code.semiarc_count()).map(semiarc_name).collect();
    let mut relations = Vec::with_capacity(2 * code.crossing_count());
    for x in code.crossings() {
        let k = x.corners();
        relations.push(Relation {
            lhs: k.c,
            left: k.b,
            right: k.a,
        });
        relations.push(Relation {
            lhs: k.d,
            left: k.a,
            right: k.b,
        });
    }
    SwitchPresentation { generators, relations }
}

/// Index of the upper generator of semiarc `id` in [`dfds`].
pub fn upper(id: usize) -> usize {
    2 * id
}

/// Index of the lower generator of semiarc `id` in [`dfds`].
pub fn lower(id: usize) -> usize {
    2 * id + 1
}

/// Two generators per semiarc, upper (`.o`) and lower (`.u`). Each crossing
/// expresses the four upper generators around it in the lower ones:
/// `ā = d̲·c̲`, `b̄ = c̲·d̲`, `c̄ = b̲·a̲`, `d̄ = a̲·b̲`.
pub fn dfds(code: &GaussCode) -> SwitchPresentation {
    let generators = (0..code.semiarc_count())
        .flat_map(|id| [format!("{}.o", semiarc_name(id)), format!("{}.u", semiarc_name(id))])
        .collect();
    let mut relations = Vec::with_capacity(4 * code.crossing_count());
    for x in code.crossings() {
        let k = x.corners();
        let rel = |lhs, left, right| Relation {
            lhs: upper(lhs),
            left: lower(left),
            right: lower(right),
        };
        relations.push(rel(k.a, k.d, k.c));
        relations.push(rel(k.b, k.c, k.d));
        relations.push(rel(k.c, k.b, k.a));
        relations.push(rel(k.d, k.a, k.b));
    }
    SwitchPresentation { generators, relations }
}

/// A relation-satisfying assignment; `values[g]` is the 1-based element
/// assigned to generator `g`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coloring {
    pub values: Vec<usize>,
}

impl Coloring {
    pub fn satisfies(&self, p: &SwitchPresentation, sw: &FiniteDoodleSwitch) -> bool {
        self.values.len() == p.generator_count()
            && p.relations
                .iter()
                .all(|r| self.values[r.lhs] == sw.mul(self.values[r.left], self.values[r.right]))
    }
}

pub fn count_colorings(p: &SwitchPresentation, sw: &FiniteDoodleSwitch) -> u128 {
    let solver = Solver::new(p, sw);
    let mut total: u128 = 1;
    for block in solver.blocks() {
        if block.len() == 1 && solver.incident[block[0]].is_empty() {
            total *= sw.order() as u128;
            continue;
        }
        let mut domains = solver.full_domains();
        let mut queue: Vec<usize> = block.iter().flat_map(|&g| solver.incident[g].iter().copied()).collect();
        queue.sort_unstable();
        queue.dedup();
        let count = solver.count(&mut domains, queue, Some(&block));
        total *= count;
        if total == 0 {
            return 0;
        }
    }
    total
}

pub fn count_doubled_colorings(code: &GaussCode, sw: &FiniteDoodleSwitch) -> u128 {
    count_colorings(&dfds(code), sw)
}

pub const DEFAULT_LIST_CAP: u128 = 1_000_000;

/// All colorings in lexicographic order. Refuses, rather than truncating,
/// when there are more than `cap`.
pub fn list_colorings(
    p: &SwitchPresentation,
    sw: &FiniteDoodleSwitch,
    cap: u128,
) -> Result<Vec<Coloring>, PresentationError> {
    let count = count_colorings(p, sw);
    if count > cap {
        return Err(PresentationError::CapExceeded { count, cap });
    }
    let solver = Solver::new(p, sw);
    let mut domains = solver.full_domains();
    let mut out = Vec::with_capacity(count as usize);
    solver.collect(&mut domains, (0..p.relations.len()).collect(), &mut out);
    out.sort();
    Ok(out)
}

pub const DEFAULT_BRUTE_FORCE_GUARD: u128 = 100_000_000;

/// Exhaustive scan over every assignment. Independent of the propagating
/// solver; used as its oracle.
pub fn brute_force_count(
    p: &SwitchPresentation,
    sw: &FiniteDoodleSwitch,
    guard: u128,
) -> Result<u128, PresentationError> {
    let n = sw.order();
    let g = p.generator_count();
    let space = (n as u128).checked_pow(g as u32).unwrap_or(u128::MAX);
    if space > guard {
        return Err(PresentationError::GuardExceeded {
            order: n,
            generators: g,
            guard,
        });
    }
    let mut values = vec![1usize; g];
    let mut count = 0;
    loop {
        if p.relations
            .iter()
            .all(|r| values[r.lhs] == sw.mul(values[r.left], values[r.right]))
        {
            count += 1;
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == g {
                return Ok(count);
            }
            if values[i] < n {
                values[i] += 1;
                break;
            }
            values[i] = 1;
            i += 1;
        }
    }
}

/// Backtracking over bitmask domains with arc-consistency propagation on
/// each relation `lhs = left · right`.
struct Solver<'a> {
    sw: &'a FiniteDoodleSwitch,
    relations: &'a [Relation],
    generators: usize,
    incident: Vec<Vec<usize>>,
}

impl<'a> Solver<'a> {
    fn new(p: &'a SwitchPresentation, sw: &'a FiniteDoodleSwitch) -> Self {
        let mut incident = vec![Vec::new(); p.generator_count()];
        for (i, r) in p.relations.iter().enumerate() {
            for g in [r.lhs, r.left, r.right] {
                if !incident[g].contains(&i) {
                    incident[g].push(i);
                }
            }
        }
        Solver {
            sw,
            relations: &p.relations,
            generators: p.generator_count(),
            incident,
        }
    }

    fn full_domains(&self) -> Vec<u64> {
        let n = self.sw.order();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        vec![full; self.generators]
    }

    /// Generators grouped into connected blocks of the relation graph.
    fn blocks(&self) -> Vec<Vec<usize>> {
        let mut block_of = vec![usize::MAX; self.generators];
        let mut blocks = Vec::new();
        for start in 0..self.generators {
            if block_of[start] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut members = vec![start];
            block_of[start] = id;
            let mut i = 0;
            while i < members.len() {
                let g = members[i];
                for &r in &self.incident[g] {
                    let rel = self.relations[r];
                    for h in [rel.lhs, rel.left, rel.right] {
                        if block_of[h] == usize::MAX {
                            block_of[h] = id;
                            members.push(h);
                        }
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            blocks.push(members);
        }
        blocks
    }

    /// Narrows the three domains of relation `r`. Returns the generators whose
    /// domain shrank, or `None` on a wipe-out.
    fn revise(&self, domains: &mut [u64], r: usize) -> Option<Vec<usize>> {
        let rel = self.relations[r];
        let (dl, dr, dz) = (domains[rel.left], domains[rel.right], domains[rel.lhs]);
        let (mut new_l, mut new_r, mut new_z) = (0u64, 0u64, 0u64);
        for x in bits(dl) {
            for y in bits(dr) {
                let z = self.sw.mul0(x, y);
                if dz & (1 << z) != 0 {
                    new_l |= 1 << x;
                    new_r |= 1 << y;
                    new_z |= 1 << z;
                }
            }
        }
        let mut changed = Vec::new();
        // a generator may fill several slots of one relation
        let mut apply = |g: usize, mask: u64, domains: &mut [u64]| {
            let narrowed = domains[g] & mask;
            if narrowed != domains[g] {
                domains[g] = narrowed;
                changed.push(g);
            }
        };
        apply(rel.left, new_l, domains);
        apply(rel.right, new_r, domains);
        apply(rel.lhs, new_z, domains);
        if [rel.left, rel.right, rel.lhs].iter().any(|&g| domains[g] == 0) {
            return None;
        }
        Some(changed)
    }

    fn propagate(&self, domains: &mut [u64], mut queue: Vec<usize>) -> bool {
        let mut queued = vec![false; self.relations.len()];
        for &r in &queue {
            queued[r] = true;
        }
        while let Some(r) = queue.pop() {
            queued[r] = false;
            let Some(changed) = self.revise(domains, r) else {
                return false;
            };
            for g in changed {
                for &s in &self.incident[g] {
                    if !queued[s] {
                        queued[s] = true;
                        queue.push(s);
                    }
                }
            }
        }
        true
    }

    /// Smallest undecided domain, ties broken by generator index.
    fn branch_variable(&self, domains: &[u64], scope: Option<&[usize]>) -> Option<usize> {
        let pick = |g: &usize| {
            let size = domains[*g].count_ones();
            (size > 1).then_some((size, *g))
        };
        match scope {
            Some(s) => s.iter().filter_map(pick).min(),
            None => (0..self.generators).filter_map(|g| pick(&g)).min(),
        }
        .map(|(_, g)| g)
    }

    fn count(&self, domains: &mut [u64], queue: Vec<usize>, scope: Option<&[usize]>) -> u128 {
        if !self.propagate(domains, queue) {
            return 0;
        }
        let Some(g) = self.branch_variable(domains, scope) else {
            return 1;
        };
        let mut total = 0;
        for v in bits(domains[g]) {
            let mut next = domains.to_vec();
            next[g] = 1 << v;
            total += self.count(&mut next, self.incident[g].clone(), scope);
        }
        total
    }

    fn collect(&self, domains: &mut [u64], queue: Vec<usize>, out: &mut Vec<Coloring>) {
        if !self.propagate(domains, queue) {
            return;
        }
        let Some(g) = self.branch_variable(domains, None) else {
            let values = domains.iter().map(|d| d.trailing_zeros() as usize + 1).collect();
            out.push(Coloring { values });
            return;
        };
        for v in bits(domains[g]) {
            let mut next = domains.to_vec();
            next[g] = 1 << v;
            self.collect(&mut next, self.incident[g].clone(), out);
        }
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let b = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sw(rows: &[&[usize]]) -> FiniteDoodleSwitch {
        FiniteDoodleSwitch::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }
    fn a() -> FiniteDoodleSwitch {
        sw(&[&[1, 2, 4, 3], &[3, 4, 2, 1], &[2, 1, 3, 4], &[4, 3, 1, 2]])
    }
    fn a1() -> FiniteDoodleSwitch {
        sw(&[&[1, 2, 1], &[3, 3, 3], &[2, 1, 2]])
    }
    fn a2() -> FiniteDoodleSwitch {
        sw(&[&[3, 2, 3], &[1, 1, 1], &[2, 3, 2]])
    }
    fn d31() -> GaussCode {
        GaussCode::parse("a b c b- a- c-").unwrap()
    }

    #[test]
    fn presentation_sizes() {
        let u = GaussCode::unknot();
        assert_eq!((fds(&u).generator_count(), fds(&u).relations().len()), (1, 0));
        assert_eq!((dfds(&u).generator_count(), dfds(&u).relations().len()), (2, 0));
        assert_eq!((fds(&d31()).generator_count(), fds(&d31()).relations().len()), (6, 6));
        assert_eq!(
            (dfds(&d31()).generator_count(), dfds(&d31()).relations().len()),
            (12, 12)
        );
    }

    #[test]
    fn kink_relations_tie_the_loop_to_t() {
        // "a a-": the loop s0 is t of the outer arc s1
        let p = fds(&GaussCode::parse("a a-").unwrap());
        assert_eq!(
            p.relation_set(),
            HashSet::from([Relation {
                lhs: 0,
                left: 1,
                right: 1
            }])
        );
        let s = p.simplify();
        assert_eq!(s.generator_count(), 1);
        assert!(s.relations().is_empty());
    }

    #[test]
    fn table_counts_for_u_and_three_crossing_curve() {
        let u = GaussCode::unknot();
        let counts: Vec<u128> = [a(), a1(), a2()].iter().map(|t| count_colorings(&fds(&u), t)).collect();
        assert_eq!(counts, vec![4, 3, 3]);
        let counts: Vec<u128> = [a(), a1(), a2()]
            .iter()
            .map(|t| count_colorings(&fds(&d31()), t))
            .collect();
        assert_eq!(counts, vec![2, 1, 1]);
        assert_eq!(count_doubled_colorings(&u, &a()), 16);
        assert_eq!(count_doubled_colorings(&d31(), &a()), 16);
        assert_eq!(count_doubled_colorings(&u, &a1()), 9);
        assert_eq!(count_colorings(&fds(&u.disjoint_union(&u)), &a()), 16);
    }

    #[test]
    fn listing_three_crossing_curve() {
        let list = list_colorings(&fds(&d31()), &a(), DEFAULT_LIST_CAP).unwrap();
        assert_eq!(
            list,
            vec![Coloring { values: vec![1; 6] }, Coloring { values: vec![3; 6] }]
        );
        let list = list_colorings(&fds(&GaussCode::unknot()), &a1(), DEFAULT_LIST_CAP).unwrap();
        assert_eq!(list.len(), 3);
        assert!(matches!(
            list_colorings(&dfds(&GaussCode::unknot()), &a(), 10),
            Err(PresentationError::CapExceeded { count: 16, cap: 10 })
        ));
    }

    #[test]
    fn brute_force_agrees_and_guards() {
        for t in [a(), a1(), a2()] {
            for p in [fds(&d31()), dfds(&GaussCode::unknot())] {
                assert_eq!(
                    brute_force_count(&p, &t, DEFAULT_BRUTE_FORCE_GUARD).unwrap(),
                    count_colorings(&p, &t)
                );
            }
        }
        assert_eq!(brute_force_count(&fds(&GaussCode::unknot()), &a(), 10).unwrap(), 4);
        assert!(matches!(
            brute_force_count(&dfds(&d31()), &a(), 1_000_000),
            Err(PresentationError::GuardExceeded {
                order: 4,
                generators: 12,
                guard: 1_000_000
            })
        ));
    }

    #[test]
    fn dfds_structure() {
        let p = dfds(&GaussCode::parse("a b c b- a- c- / o").unwrap());
        let mut lhs = vec![0; p.generator_count()];
        let mut rhs = vec![0; p.generator_count()];
        for r in p.relations() {
            lhs[r.lhs] += 1;
            rhs[r.left] += 1;
            rhs[r.right] += 1;
        }
        for id in 0..6 {
            assert_eq!((lhs[upper(id)], rhs[upper(id)]), (2, 0));
            assert_eq!(lhs[lower(id)], 0);
            assert!(rhs[lower(id)] > 0);
        }
        assert_eq!(
            (lhs[upper(6)], rhs[upper(6)], lhs[lower(6)], rhs[lower(6)]),
            (0, 0, 0, 0)
        );
        assert_eq!(p.generators()[upper(6)], "s6.o");
        assert_eq!(p.generators()[lower(6)], "s6.u");
    }

    #[test]
    fn rejects_dangling_generators() {
        assert!(SwitchPresentation::new(
            vec!["x".into()],
            vec![Relation {
                lhs: 0,
                left: 0,
                right: 1
            }]
        )
        .is_err());
    }
}

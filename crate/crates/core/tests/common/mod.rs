//! Independent oracles and random input generators shared by the
//! integration tests. Nothing here calls the closure, stabilizer or
//! canonical-form code it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::Rng;

use enriques_monodromy::root_scheme::{Mark, RootScheme, Token};
use enriques_monodromy::topology::{Half, SurfaceComponent};

pub type Images = Vec<usize>;

/// All permutations of `0..n` as image vectors (Heap's algorithm).
pub fn all_permutations(n: usize) -> Vec<Images> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Images>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

pub fn compose(p: &[usize], q: &[usize]) -> Images {
    q.iter().map(|&i| p[i]).collect()
}

pub fn element_order(p: &[usize]) -> usize {
    let id: Images = (0..p.len()).collect();
    let mut x = p.to_vec();
    let mut k = 1;
    while x != id {
        x = compose(p, &x);
        k += 1;
    }
    k
}

/// Fixpoint closure: keep multiplying every pair until nothing new appears.
pub fn naive_closure(n: usize, gens: &[Images]) -> BTreeSet<Images> {
    let mut set: BTreeSet<Images> = gens.iter().cloned().collect();
    set.insert((0..n).collect());
    loop {
        let current: Vec<Images> = set.iter().cloned().collect();
        let mut grew = false;
        for a in &current {
            for b in &current {
                if set.insert(compose(a, b)) {
                    grew = true;
                }
            }
        }
        if !grew {
            return set;
        }
    }
}

/// Every permutation of the components of `h` (canonical order) that maps
/// each component to a homeomorphic one and each quarter block onto a
/// quarter block.
pub fn brute_force_stabilizer(h: &Half, quarters: &[Vec<usize>]) -> Vec<Images> {
    let comps = h.components();
    let blocks: Vec<BTreeSet<usize>> = quarters
        .iter()
        .map(|b| b.iter().copied().collect())
        .collect();
    all_permutations(comps.len())
        .into_iter()
        .filter(|p| (0..comps.len()).all(|i| comps[p[i]] == comps[i]))
        .filter(|p| {
            blocks.iter().all(|b| {
                let image: BTreeSet<usize> = b.iter().map(|&i| p[i]).collect();
                blocks.contains(&image)
            })
        })
        .collect()
}

/// Class-preserving permutations of `h`.
pub fn brute_force_young(h: &Half) -> Vec<Images> {
    brute_force_stabilizer(h, &[])
}

pub fn is_abelian(elems: &[Images]) -> bool {
    elems
        .iter()
        .all(|a| elems.iter().all(|b| compose(a, b) == compose(b, a)))
}

/// Sorted list of element orders.
pub fn order_profile(elems: &[Images]) -> Vec<usize> {
    let mut v: Vec<usize> = elems.iter().map(|p| element_order(p)).collect();
    v.sort();
    v
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

// Dihedral orbit of a cyclic word, computed by slicing and reversing.

fn mirror(t: &Token) -> Token {
    match t {
        Token::Gap => Token::Gap,
        Token::Segment(m) => Token::Segment(m.iter().rev().copied().collect()),
    }
}

pub fn dihedral_orbit(word: &[Token]) -> BTreeSet<Vec<Token>> {
    let n = word.len();
    let mut out = BTreeSet::new();
    if n == 0 {
        out.insert(Vec::new());
        return out;
    }
    let reversed: Vec<Token> = word.iter().rev().map(mirror).collect();
    for base in [word.to_vec(), reversed] {
        for k in 0..n {
            let mut w = base[k..].to_vec();
            w.extend_from_slice(&base[..k]);
            out.insert(w);
        }
    }
    out
}

pub fn random_mark(rng: &mut StdRng) -> Mark {
    match rng.gen_range(0..3) {
        0 => Mark::APoint(rng.gen_range(1..=3)),
        1 => Mark::DPoint(rng.gen_range(2..=3)),
        _ => Mark::CircleVertex,
    }
}

/// Alternating word with `segments` segments and sparse marks.
pub fn random_word(rng: &mut StdRng, segments: usize) -> Vec<Token> {
    let start_with_gap = rng.gen_bool(0.5);
    let mut w = Vec::with_capacity(2 * segments);
    for _ in 0..segments {
        let marks: Vec<Mark> = match rng.gen_range(0..4) {
            0 | 1 => Vec::new(),
            2 => vec![random_mark(rng)],
            _ => vec![random_mark(rng), random_mark(rng)],
        };
        if start_with_gap {
            w.push(Token::Gap);
            w.push(Token::Segment(marks));
        } else {
            w.push(Token::Segment(marks));
            w.push(Token::Gap);
        }
    }
    w
}

pub fn random_root_scheme(rng: &mut StdRng, max_segments: usize) -> RootScheme {
    let k = rng.gen_range(0..=max_segments);
    let grade = if rng.gen_bool(0.3) {
        Some(rng.gen_range(1..=6))
    } else {
        None
    };
    RootScheme::new(random_word(rng, k), grade).expect("generator builds alternating words")
}

pub fn random_component(rng: &mut StdRng) -> SurfaceComponent {
    match rng.gen_range(0..4) {
        0 | 1 => SurfaceComponent::Sphere,
        2 => SurfaceComponent::Orientable(rng.gen_range(1..=4)),
        _ => SurfaceComponent::Nonorientable(rng.gen_range(1..=7)),
    }
}

pub fn random_half(rng: &mut StdRng, max_len: usize) -> Half {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| random_component(rng)).collect()
}

/// Writes a half in a random, non-canonical but valid way: shuffled terms,
/// split multiplicities, random spacing.
pub fn scrambled_half_text(rng: &mut StdRng, h: &Half) -> String {
    if h.is_empty() {
        return " 0 ".to_string();
    }
    let mut terms: Vec<String> = Vec::new();
    for (c, mut n) in h.classes() {
        while n > 0 {
            let take = rng.gen_range(1..=n);
            n -= take;
            let count = if take == 1 && rng.gen_bool(0.5) {
                String::new()
            } else {
                take.to_string()
            };
            let sp = if rng.gen_bool(0.3) { " " } else { "" };
            terms.push(format!("{count}{sp}{c}"));
        }
    }
    for i in (1..terms.len()).rev() {
        let j = rng.gen_range(0..=i);
        terms.swap(i, j);
    }
    let sep = if rng.gen_bool(0.5) { "+" } else { " + " };
    terms.join(sep)
}

// Real schemes, generated as trees and printed in a scrambled sibling order.

#[derive(Clone, Debug)]
pub struct Tree(pub Vec<Tree>);

pub fn random_trees(rng: &mut StdRng, budget: &mut usize, depth: usize) -> Vec<Tree> {
    let mut out = Vec::new();
    while *budget > 0 && rng.gen_bool(0.6) {
        *budget -= 1;
        let kids = if depth < 3 && rng.gen_bool(0.35) {
            random_trees(rng, budget, depth + 1)
        } else {
            Vec::new()
        };
        out.push(Tree(kids));
    }
    out
}

pub fn tree_count(ts: &[Tree]) -> usize {
    ts.iter().map(|t| 1 + tree_count(&t.0)).sum()
}

fn trees_text(rng: &mut StdRng, ts: &[Tree], j: bool) -> String {
    let mut parts: Vec<String> = Vec::new();
    if j {
        parts.push("J".into());
    }
    for t in ts {
        if t.0.is_empty() {
            parts.push("1".into());
        } else {
            parts.push(format!("1<{}>", trees_text(rng, &t.0, false)));
        }
    }
    for i in (1..parts.len()).rev() {
        let k = rng.gen_range(0..=i);
        parts.swap(i, k);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let sep = if rng.gen_bool(0.5) { " u " } else { "u" };
    parts.join(sep)
}

/// A valid scheme text and its oval count.
pub fn random_scheme_text(rng: &mut StdRng) -> (String, usize) {
    if rng.gen_bool(0.5) {
        let mut budget = 8;
        let ts = random_trees(rng, &mut budget, 0);
        let j = rng.gen_bool(0.2);
        (format!("<{}>", trees_text(rng, &ts, j)), tree_count(&ts))
    } else {
        let zones = rng.gen_range(2..=4);
        let mut total = 0;
        let mut texts = Vec::new();
        for _ in 0..zones {
            let mut budget = 4;
            let ts = random_trees(rng, &mut budget, 0);
            total += tree_count(&ts);
            texts.push(trees_text(rng, &ts, false));
        }
        (format!("<{}>", texts.join("|")), total)
    }
}

/// Root-scheme text with random separators between marks.
pub fn root_scheme_text(rng: &mut StdRng, s: &RootScheme) -> String {
    let tokens: Vec<String> = s
        .cycle()
        .iter()
        .map(|t| match t {
            Token::Gap => ".".to_string(),
            Token::Segment(ms) => {
                let sep = if rng.gen_bool(0.5) { "," } else { " " };
                let body: Vec<String> = ms.iter().map(ToString::to_string).collect();
                format!("[{}]", body.join(sep))
            }
        })
        .collect();
    let mut out = format!("({})", tokens.join(" "));
    if let Some(r) = s.grade() {
        out.push_str(&format!("@{r}"));
    }
    out
}

/// A valid catalog file obtained by randomly pruning and reordering the
/// shipped one at the JSON level.
pub fn random_catalog_text(rng: &mut StdRng, shipped: &str) -> String {
    use serde_json::Value;
    let mut v: Value = serde_json::from_str(shipped).unwrap();
    let obj = v.as_object_mut().unwrap();
    if let Some(Value::Array(fams)) = obj.get_mut("families") {
        fams.retain(|_| rng.gen_bool(0.7));
        for f in fams.iter_mut() {
            let f = f.as_object_mut().unwrap();
            if let Some(Value::Array(xs)) = f.get_mut("exceptions") {
                xs.retain(|_| rng.gen_bool(0.6));
            }
            if let Some(Value::Array(es)) = f.get_mut("extremal") {
                for i in (1..es.len()).rev() {
                    let k = rng.gen_range(0..=i);
                    es.swap(i, k);
                }
            }
        }
        for i in (1..fams.len()).rev() {
            let k = rng.gen_range(0..=i);
            fams.swap(i, k);
        }
    }
    if let Some(Value::Object(sc)) = obj.get_mut("scheme_catalogs") {
        let keys: Vec<String> = sc.keys().cloned().collect();
        for k in keys {
            if rng.gen_bool(0.3) {
                sc.remove(&k);
            }
        }
    }
    if let Some(Value::Array(rs)) = obj.get_mut("root_schemes") {
        rs.retain(|_| rng.gen_bool(0.7));
    }
    if rng.gen_bool(0.5) {
        serde_json::to_string(&v).unwrap()
    } else {
        serde_json::to_string_pretty(&v).unwrap()
    }
}

#![allow(dead_code)]

//! Independent oracles for cross-checking the engine, plus random input
//! generators shared by the integration suites.
//!
//! The reducer here deliberately avoids the library's rewriting machinery:
//! it works on bare label pairs, rewrites the *rightmost* inverted pair
//! first (the library default is leftmost), keeps no canonical intermediate
//! form and memoizes nothing. The minor evaluator enumerates permutations
//! in lexicographic order via repeated `next_permutation` rather than the
//! library's recursive swap enumeration.

use std::collections::BTreeMap;

use qmx_core::laurent::LaurentInt;
use qmx_core::ncpoly::{Generator, NCPoly, Word};
use rand::rngs::StdRng;
use rand::Rng;

pub type RawWord = Vec<(u32, u32)>;

/// Canonical map of a raw polynomial, zero coefficients pruned.
pub type RawPoly = BTreeMap<RawWord, LaurentInt>;

fn raw_add(poly: &mut RawPoly, word: RawWord, coeff: LaurentInt) {
    if coeff.is_zero() {
        return;
    }
    match poly.get_mut(&word) {
        Some(c) => {
            let sum = &*c + &coeff;
            if sum.is_zero() {
                poly.remove(&word);
            } else {
                *c = sum;
            }
        }
        None => {
            poly.insert(word, coeff);
        }
    }
}

/// Rightmost-redex normal form computed from scratch on bare label pairs.
pub fn naive_normal_form(terms: Vec<(RawWord, LaurentInt)>) -> RawPoly {
    let q = LaurentInt::q_pow(1);
    let q_inv = LaurentInt::q_pow(-1);
    let correction = -(&q - &q_inv);
    let mut out = RawPoly::new();
    let mut work = terms;
    while let Some((w, c)) = work.pop() {
        let redex = (0..w.len().saturating_sub(1)).rev().find(|&i| w[i] > w[i + 1]);
        let Some(i) = redex else {
            raw_add(&mut out, w, c);
            continue;
        };
        let a = w[i]; // bigger letter, first
        let b = w[i + 1];
        let mut swapped = w.clone();
        swapped.swap(i, i + 1);
        if a.0 == b.0 || a.1 == b.1 {
            work.push((swapped, &c * &q_inv));
        } else if a.0 > b.0 && a.1 > b.1 {
            let mut corr = w.clone();
            corr[i] = (b.0, a.1);
            corr[i + 1] = (a.0, b.1);
            work.push((swapped, c.clone()));
            work.push((corr, &c * &correction));
        } else {
            work.push((swapped, c));
        }
    }
    out
}

/// Library polynomial converted to the oracle representation (words taken
/// verbatim, no reduction).
pub fn to_raw(p: &NCPoly) -> Vec<(RawWord, LaurentInt)> {
    p.terms()
        .map(|(w, c)| (w.factors().iter().map(|g| (g.row(), g.col())).collect(), c.clone()))
        .collect()
}

/// Compares a library polynomial with an oracle polynomial for equality of
/// canonical forms (the library side is normal-formed first).
pub fn matches_oracle(p: &NCPoly, oracle: &RawPoly) -> bool {
    let nf = p.normal_form();
    let as_raw: RawPoly = to_raw(&nf).into_iter().collect();
    as_raw == *oracle
}

/// Lexicographic next permutation; `false` once the sequence is the last.
fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

fn inversions(perm: &[usize]) -> i64 {
    let mut count = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}

/// Brute-force quantum minor: enumerates the symmetric group
/// lexicographically, forms each signed word and reduces with the naive
/// rightmost-redex reducer.
pub fn naive_minor(rows: &[u32], cols: &[u32]) -> RawPoly {
    assert_eq!(rows.len(), cols.len());
    let m = rows.len();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut terms: Vec<(RawWord, LaurentInt)> = Vec::new();
    loop {
        let word: RawWord = (0..m).map(|i| (rows[i], cols[perm[i]])).collect();
        terms.push((word, LaurentInt::neg_q_pow(inversions(&perm))));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    naive_normal_form(terms)
}

/// Closed-form exterior normal form of a single word: zero on a repeated
/// index, otherwise `(-q)^inversions` times the sorted word.
pub fn naive_ext_normal_form(indices: &[u32]) -> Option<(Vec<u32>, LaurentInt)> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let mut inv = 0;
    for i in 0..indices.len() {
        for j in i + 1..indices.len() {
            if indices[i] > indices[j] {
                inv += 1;
            }
        }
    }
    Some((sorted, LaurentInt::neg_q_pow(inv)))
}

/// A random word with the given length bound and label bound.
pub fn random_word(rng: &mut StdRng, max_len: usize, max_label: u32) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::new(
        (0..len)
            .map(|_| Generator::new(rng.gen_range(1..=max_label), rng.gen_range(1..=max_label)))
            .collect(),
    )
}

/// All words of the given exact length over labels `1..=max_label`.
pub fn all_words(len: usize, max_label: u32) -> Vec<Word> {
    let gens: Vec<Generator> =
        (1..=max_label).flat_map(|r| (1..=max_label).map(move |c| Generator::new(r, c))).collect();
    let mut out: Vec<Vec<Generator>> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                gens.iter().map(move |&g| {
                    let mut v = w.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(Word::new).collect()
}

#![allow(dead_code)]

use ncdb::freealg::{Algebra, Element, GenId, Letter, Tensor2, Tensor3, Word};
use ncdb::speclang::{Generator, SpecDocument, KEYWORDS};
use ncdb::{BracketSpec, Q};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn small_q(r: &mut impl Rng) -> Q {
    Q::new(r.gen_range(-3..=3), r.gen_range(1..=2))
}

/// A random reduced word over the letters of `alg`.
pub fn random_word(r: &mut impl Rng, alg: &Algebra, max_len: usize) -> Word {
    let letters = alg.letters();
    let len = r.gen_range(0..=max_len);
    Word::from_letters((0..len).map(|_| letters[r.gen_range(0..letters.len())]))
}

pub fn random_nonconstant_word(r: &mut impl Rng, alg: &Algebra, max_len: usize) -> Word {
    loop {
        let w = random_word(r, alg, max_len);
        if !w.is_one() {
            return w;
        }
    }
}

/// Random table with up to `terms` terms per generator pair, positive words
/// of length at most 2 in each factor. No symmetry is imposed.
pub fn random_spec(r: &mut impl Rng, alg: &Algebra, terms: usize) -> BracketSpec {
    let d = alg.ngens() as u16;
    let mut entries = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let mut t = Tensor2::zero();
            for _ in 0..r.gen_range(0..=terms) {
                let a = Word::from_letters((0..r.gen_range(0..=2)).map(|_| Letter::pos(GenId(r.gen_range(0..d)))));
                let b = Word::from_letters((0..r.gen_range(0..=2)).map(|_| Letter::pos(GenId(r.gen_range(0..d)))));
                t.add_term((a, b), small_q(r));
            }
            entries.push(((GenId(i), GenId(j)), t));
        }
    }
    BracketSpec::new(alg.clone(), entries).unwrap()
}

pub fn el(w: &Word) -> Element {
    Element::word(w.clone())
}

pub fn letter_el(l: Letter) -> Element {
    Element::word(Word::letter(l))
}

pub fn random_ident(r: &mut impl Rng) -> String {
    loop {
        let first = *[b'a', b'v', b'x', b'y', b'_', b'Z'].choose(r).unwrap() as char;
        let rest: String = (0..r.gen_range(0..4))
            .map(|_| *b"abcxyz0123_".choose(r).unwrap() as char)
            .collect();
        let s = format!("{first}{rest}");
        if !KEYWORDS.contains(&s.as_str()) {
            return s;
        }
    }
}

pub fn random_text(r: &mut impl Rng) -> String {
    let pool = ["a", "b", " ", "\"", "\\", "⊗", "λ", "#", "1/2", "(x)", "{", ";"];
    (0..r.gen_range(0..8)).map(|_| *pool.choose(r).unwrap()).collect()
}

pub fn random_doc(seed: u64) -> SpecDocument {
    let mut r = rng(seed);
    let d = r.gen_range(1..=4);
    let mut generators: Vec<Generator> = Vec::new();
    while generators.len() < d {
        let name = random_ident(&mut r);
        if generators.iter().all(|g| g.name != name) {
            generators.push(Generator { name, invertible: r.gen_bool(0.4) });
        }
    }
    let mut doc = SpecDocument {
        name: r.gen_bool(0.5).then(|| random_text(&mut r)),
        comments: (0..r.gen_range(0..3)).map(|_| random_text(&mut r).trim().to_string()).collect(),
        weight: r.gen_bool(0.6).then(|| (0..d).map(|_| Q::new(r.gen_range(-20..=20), r.gen_range(1..=7))).collect()),
        generators,
        ..Default::default()
    };
    let alg = doc.algebra().unwrap();
    for _ in 0..r.gen_range(0..=d * d) {
        let i = GenId(r.gen_range(0..d) as u16);
        let j = GenId(r.gen_range(0..d) as u16);
        let mut t = Tensor2::zero();
        for _ in 0..r.gen_range(0..4) {
            let a = random_word(&mut r, &alg, 3);
            let b = random_word(&mut r, &alg, 3);
            t.add_term((a, b), Q::new(r.gen_range(-9..=9), r.gen_range(1..=5)));
        }
        doc.entries.insert((i, j), t);
    }
    doc
}

pub fn letter(code: u8) -> Letter {
    Letter::new(GenId((code / 2) as u16), if code % 2 == 0 { 1 } else { -1 })
}

/// Deletes the first cancelling pair and rescans from the start.
pub fn naive_reduce(mut ls: Vec<Letter>) -> Vec<Letter> {
    'scan: loop {
        for i in 0..ls.len().saturating_sub(1) {
            if ls[i + 1] == ls[i].inverse() {
                ls.drain(i..i + 2);
                continue 'scan;
            }
        }
        return ls;
    }
}

/// Deletes cancelling pairs in a random order.
pub fn random_order_reduce(mut ls: Vec<Letter>, r: &mut impl Rng) -> Vec<Letter> {
    loop {
        let spots: Vec<usize> = (0..ls.len().saturating_sub(1)).filter(|&i| ls[i + 1] == ls[i].inverse()).collect();
        if spots.is_empty() {
            return ls;
        }
        let i = spots[r.gen_range(0..spots.len())];
        ls.drain(i..i + 2);
    }
}

pub fn p3(x: &Word, y: &Word, z: &Word) -> Tensor3 {
    Tensor3::pure3(&el(x), &el(y), &el(z))
}

/// `Σ u' ⊗ s' ⊗ s'' u''` for `u = {{a2,c}}`, `s = {{b,a1}} + {{a1,b}}°`.
pub fn correction(spec: &BracketSpec, a1: &Word, a2: &Word, b: &Word, c: &Word) -> Tensor3 {
    let u = spec.dbracket(&el(a2), &el(c)).unwrap();
    let s = spec.dbracket(&el(b), &el(a1)).unwrap() + spec.dbracket(&el(a1), &el(b)).unwrap().flip();
    let mut out = Tensor3::zero();
    for ((u1, u2), cu) in u.iter() {
        for ((s1, s2), cs) in s.iter() {
            out.add_term((u1.clone(), s1.clone(), s2.concat(u2)), cu * cs);
        }
    }
    out
}

/// Checks the three derivation laws of the double Jacobiator on one triple.
pub fn derivation_laws(spec: &BracketSpec, ws: [&Word; 6]) -> Result<(), String> {
    let [a1, a2, b1, b2, c1, c2] = ws;
    let one = Word::one();
    let dj = |x: &Word, y: &Word, z: &Word| spec.djac(&el(x), &el(y), &el(z)).unwrap();
    let (a, b, c) = (a1.concat(a2), b1.concat(b2), c1.concat(c2));

    let lhs = dj(&a, &b, &c);
    let third = p3(c1, &one, &one).t3_mul(&dj(&a, &b, c2)) + dj(&a, &b, c1).t3_mul(&p3(&one, &one, c2));
    if lhs != third {
        return Err("third slot".into());
    }
    let second = p3(&one, &one, b1).t3_mul(&dj(&a, b2, &c)) + dj(&a, b1, &c).t3_mul(&p3(&one, b2, &one));
    if lhs != second {
        return Err("second slot".into());
    }
    let first = p3(&one, a1, &one).t3_mul(&dj(a2, &b, &c)) + dj(a1, &b, &c).t3_mul(&p3(a2, &one, &one))
        - correction(spec, a1, a2, &b, &c);
    if lhs != first {
        return Err("first slot".into());
    }
    Ok(())
}

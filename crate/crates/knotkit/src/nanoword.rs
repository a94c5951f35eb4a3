//! Word-combinatorial link presentations: phrases in which every letter
//! occurs exactly twice, with letter values drawn from a signed alphabet.
//!
//! Two alphabets are supported. The two-valued one carries bare crossing
//! signs `{+1, -1}`; the four-valued one additionally records which passage
//! of the crossing is read first (`a` = the under-passage comes first,
//! `b` = the over-passage comes first), giving values `a+`, `a-`, `b+`,
//! `b-`. Projecting the four-valued alphabet onto signs is `a+, b+ -> +1`
//! and `a-, b- -> -1`; lifting a sign phrase picks the under-first letter
//! of that sign.
//!
//! Cabling replaces each word by a bundle of parallel copies. The copies a
//! passage meets on the other strand arrive in an order set by the passage
//! type and the crossing sign — an under-passage of a positive letter meets
//! the other bundle in ascending copy order, an over-passage in descending
//! order, and both flip when the sign does. This matches the plane geometry
//! of cabled diagrams, with parallel copies pushed to the left of the
//! direction of travel, and is verified against diagram-level cabling
//! through the traversal-code bridge.

use std::collections::BTreeMap;
use std::fmt;

use crate::diagram::GaussCode;
use crate::{Error, Result};

/// A value in the four-letter alphabet: which passage is read first, and
/// the crossing sign.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct StarValue {
    /// True when the first occurrence in reading order is the over-passage.
    pub over_first: bool,
    /// The crossing sign, `+1` or `-1`.
    pub sign: i8,
}

impl StarValue {
    pub fn new(over_first: bool, sign: i8) -> Self {
        StarValue { over_first, sign }
    }
}

impl fmt::Display for StarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.over_first { 'b' } else { 'a' };
        let sign = if self.sign > 0 { '+' } else { '-' };
        write!(f, "{}{}", kind, sign)
    }
}

/// How a letter value is written in the text format and what structure the
/// cabling rules may read off it.
pub trait LetterValue: Copy + Ord + fmt::Display {
    /// The crossing sign carried by the value.
    fn sign(self) -> i8;
    /// Whether the letter's first occurrence is its over-passage. Sign-only
    /// values fix the under-first reading used by the lift.
    fn over_first(self) -> bool;
    /// Parses the text form; `None` when the token belongs to the other
    /// alphabet.
    fn parse(token: &str) -> Option<Self>;
    /// Rebuilds the value after cabling from the first occurrence's passage
    /// type and the inherited sign.
    fn from_passages(over_first: bool, sign: i8) -> Self;
}

impl LetterValue for i8 {
    fn sign(self) -> i8 {
        self
    }

    fn over_first(self) -> bool {
        false
    }

    fn parse(token: &str) -> Option<Self> {
        match token {
            "+1" | "1" => Some(1),
            "-1" => Some(-1),
            _ => None,
        }
    }

    fn from_passages(_over_first: bool, sign: i8) -> Self {
        sign
    }
}

impl LetterValue for StarValue {
    fn sign(self) -> i8 {
        self.sign
    }

    fn over_first(self) -> bool {
        self.over_first
    }

    fn parse(token: &str) -> Option<Self> {
        match token {
            "a+" => Some(StarValue::new(false, 1)),
            "a-" => Some(StarValue::new(false, -1)),
            "b+" => Some(StarValue::new(true, 1)),
            "b-" => Some(StarValue::new(true, -1)),
            _ => None,
        }
    }

    fn from_passages(over_first: bool, sign: i8) -> Self {
        StarValue::new(over_first, sign)
    }
}

/// A phrase: a list of words over a shared letter set, every letter
/// occurring exactly twice across the whole phrase, each letter carrying a
/// value. A one-word phrase is a word presentation of a knot; more words
/// present a link, one word per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nanophrase<V: LetterValue> {
    names: Vec<String>,
    values: Vec<V>,
    words: Vec<Vec<usize>>,
}

/// A sign-valued phrase.
pub type SignPhrase = Nanophrase<i8>;
/// A phrase over the four-letter alphabet.
pub type StarPhrase = Nanophrase<StarValue>;

/// Both occurrences of one letter as `(word, position)`, in reading order.
type Occurrences = (usize, usize, usize, usize);

impl<V: LetterValue> Nanophrase<V> {
    /// Builds and validates a phrase from named words and value bindings.
    /// Every letter must occur exactly twice, have exactly one binding, and
    /// every binding must be used.
    pub fn from_parts(words: Vec<Vec<String>>, bindings: Vec<(String, V)>) -> Result<Self> {
        let mut values_by_name: BTreeMap<&str, V> = BTreeMap::new();
        for (name, v) in &bindings {
            if values_by_name.insert(name, *v).is_some() {
                return Err(Error::Parse(format!("duplicate value binding for {}", name)));
            }
        }
        let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
        let mut names = Vec::new();
        let mut values = Vec::new();
        let mut id_words = Vec::with_capacity(words.len());
        for word in &words {
            let mut id_word = Vec::with_capacity(word.len());
            for name in word {
                let next = ids.len();
                let id = *ids.entry(name).or_insert(next);
                if id == names.len() {
                    names.push(name.clone());
                    let v = values_by_name.get(name.as_str()).ok_or_else(|| {
                        Error::Parse(format!("letter {} has no value binding", name))
                    })?;
                    values.push(*v);
                }
                id_word.push(id);
            }
            id_words.push(id_word);
        }
        if let Some((name, _)) = bindings.iter().find(|(n, _)| !ids.contains_key(n.as_str())) {
            return Err(Error::Parse(format!("value bound to absent letter {}", name)));
        }
        Self::from_ids(names, values, id_words)
    }

    /// Builds a phrase whose letters are already densely numbered in first
    /// occurrence order, checking the two-occurrence rule.
    fn from_ids(names: Vec<String>, values: Vec<V>, words: Vec<Vec<usize>>) -> Result<Self> {
        let mut counts = vec![0usize; names.len()];
        for word in &words {
            for &id in word {
                counts[id] += 1;
            }
        }
        if let Some(id) = (0..counts.len()).find(|&id| counts[id] != 2) {
            return Err(Error::Parse(format!(
                "letter {} occurs {} times; every letter must occur exactly twice",
                names[id], counts[id]
            )));
        }
        Ok(Nanophrase { names, values, words })
    }

    /// Number of words (presented components).
    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    /// Number of distinct letters.
    pub fn letter_count(&self) -> usize {
        self.names.len()
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn value(&self, id: usize) -> V {
        self.values[id]
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    /// Both occurrences of each letter in reading order.
    fn occurrences(&self) -> Vec<Occurrences> {
        let mut firsts: Vec<Option<(usize, usize)>> = vec![None; self.names.len()];
        let mut out: Vec<Occurrences> = vec![(0, 0, 0, 0); self.names.len()];
        for (w, word) in self.words.iter().enumerate() {
            for (pos, &id) in word.iter().enumerate() {
                match firsts[id] {
                    None => firsts[id] = Some((w, pos)),
                    Some((fw, fp)) => out[id] = (fw, fp, w, pos),
                }
            }
        }
        out
    }

    /// The words of each letter's two occurrences; equal entries mark a
    /// letter living on a single component.
    pub fn letter_words(&self, id: usize) -> (usize, usize) {
        let (fw, _, sw, _) = self.occurrences()[id];
        (fw, sw)
    }

    /// The phrase with letters renamed `A, B, C, …` in order of first
    /// occurrence. Two phrases present the same object up to renaming
    /// exactly when their canonical forms are equal.
    pub fn canonical(&self) -> Self {
        let mut rename = vec![usize::MAX; self.names.len()];
        let mut next = 0usize;
        for word in &self.words {
            for &id in word {
                if rename[id] == usize::MAX {
                    rename[id] = next;
                    next += 1;
                }
            }
        }
        let mut names = vec![String::new(); next];
        let mut values = self.values.clone();
        for id in 0..self.names.len() {
            names[rename[id]] = canonical_name(rename[id]);
            values[rename[id]] = self.values[id];
        }
        let words = self
            .words
            .iter()
            .map(|w| w.iter().map(|&id| rename[id]).collect())
            .collect();
        Nanophrase { names, values, words }
    }

    /// Equality up to letter renaming.
    pub fn equal_up_to_renaming(&self, other: &Self) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.values == b.values && a.words == b.words
    }

    /// The parallel-copy replacement of every word, `m[k]` copies for word
    /// `k`. Copies are indexed in the order they stack to the left of the
    /// direction of travel; a letter between words `k` and `l` spawns one
    /// letter per copy pair, and copy runs follow the passage-order rule in
    /// the module documentation.
    pub fn cable(&self, m: &[u32]) -> Result<Self> {
        if m.len() != self.words.len() {
            return Err(Error::Parse(format!(
                "cable width list has {} entries for {} words",
                m.len(),
                self.words.len()
            )));
        }
        let occ = self.occurrences();
        // Dense ids for spawned letters keyed by (letter, under copy, over
        // copy); for sign-only phrases the lift reads the first occurrence
        // as the under-passage.
        let mut ids: BTreeMap<(usize, u32, u32), usize> = BTreeMap::new();
        let mut spawned: Vec<(usize, u32, u32)> = Vec::new();
        let mut words = Vec::new();
        let mut first_passage: BTreeMap<usize, bool> = BTreeMap::new();
        for (k, word) in self.words.iter().enumerate() {
            for u in 0..m[k] {
                let mut out = Vec::new();
                for (pos, &a) in word.iter().enumerate() {
                    let (fw, fp, sw, _) = occ[a];
                    let first = (k, pos) == (fw, fp);
                    let other = if first { sw } else { fw };
                    let sign = self.values[a].sign();
                    let over = self.values[a].over_first() == first;
                    // An under-passage of a positive letter meets the other
                    // bundle in ascending copy order; flipping the passage
                    // or the sign flips the order.
                    let ascending = over != (sign > 0);
                    for step in 0..m[other] {
                        let w = if ascending { step } else { m[other] - 1 - step };
                        let key = if over { (a, w, u) } else { (a, u, w) };
                        let next = ids.len();
                        let id = *ids.entry(key).or_insert(next);
                        if id == spawned.len() {
                            spawned.push(key);
                            first_passage.insert(id, over);
                        }
                        out.push(id);
                    }
                }
                words.push(out);
            }
        }
        let names = spawned
            .iter()
            .map(|&(a, u, w)| format!("{}({},{})", self.names[a], u, w))
            .collect();
        let values = spawned
            .iter()
            .enumerate()
            .map(|(id, &(a, _, _))| {
                V::from_passages(first_passage[&id], self.values[a].sign())
            })
            .collect();
        Self::from_ids(names, values, words)
    }
}

impl StarPhrase {
    /// Forgets passage order, keeping signs.
    pub fn project(&self) -> SignPhrase {
        Nanophrase {
            names: self.names.clone(),
            values: self.values.iter().map(|v| v.sign).collect(),
            words: self.words.clone(),
        }
    }

    /// The traversal code of a diagram as a phrase over the four-letter
    /// alphabet: one word per component in stored order, one letter per
    /// crossing, valued by first-passage type and crossing sign.
    /// Crossing-free components become empty words after the others.
    pub fn from_gauss(code: &GaussCode) -> Self {
        let mut ids: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
        let mut values = Vec::new();
        let mut words = Vec::new();
        for comp in &code.components {
            let mut word = Vec::with_capacity(comp.len());
            for visit in comp {
                let next = ids.len();
                let id = *ids.entry(visit.key).or_insert(next);
                if id == values.len() {
                    values.push(StarValue::new(visit.over, visit.sign));
                }
                word.push(id);
            }
            words.push(word);
        }
        words.extend(std::iter::repeat_with(Vec::new).take(code.free_loops));
        let mut names = vec![String::new(); ids.len()];
        for (key, &id) in &ids {
            names[id] = format!("x{},{},{}", key.0, key.1, key.2);
        }
        Nanophrase { names, values, words }
    }
}

impl SignPhrase {
    /// Reads every letter as under-passage-first with its sign, landing in
    /// the four-letter alphabet. Projecting recovers the input.
    pub fn lift(&self) -> StarPhrase {
        Nanophrase {
            names: self.names.clone(),
            values: self.values.iter().map(|&s| StarValue::new(false, s)).collect(),
            words: self.words.clone(),
        }
    }
}

/// Whether cabling a sign phrase directly agrees, up to renaming, with
/// lifting it, cabling over the four-letter alphabet, and projecting back.
pub fn commute_cable_project(p: &SignPhrase, m: &[u32]) -> Result<bool> {
    let direct = p.cable(m)?;
    let through_lift = p.lift().cable(m)?.project();
    Ok(direct.equal_up_to_renaming(&through_lift))
}

/// Canonical letter names: `A`–`Z`, then `L26`, `L27`, ….
fn canonical_name(id: usize) -> String {
    if id < 26 {
        char::from(b'A' + id as u8).to_string()
    } else {
        format!("L{}", id)
    }
}

impl<V: LetterValue> fmt::Display for Nanophrase<V> {
    /// Words separated by `|`, an empty word written `-`, then one `=`
    /// binding per letter. Single-letter names are packed; longer names are
    /// space-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spaced = self.names.iter().any(|n| n.chars().count() > 1);
        for (k, word) in self.words.iter().enumerate() {
            if k > 0 {
                write!(f, " | ")?;
            }
            if word.is_empty() {
                write!(f, "-")?;
            } else {
                for (pos, &id) in word.iter().enumerate() {
                    if spaced && pos > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", self.names[id])?;
                }
            }
        }
        for (id, name) in self.names.iter().enumerate() {
            let sep = if self.words.is_empty() && id == 0 { "" } else { " | " };
            write!(f, "{}{}={}", sep, name, self.values[id])?;
        }
        Ok(())
    }
}

/// A parsed phrase in whichever alphabet the value table uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedPhrase {
    Signs(SignPhrase),
    Star(StarPhrase),
}

/// Parses the text format: `#` comments, words separated by `|` with `-`
/// for an empty word, and a trailing sequence of `name=value` bindings.
/// Values are `+1`/`-1` or `a+`, `a-`, `b+`, `b-`; the two alphabets must
/// not be mixed. A word is split on whitespace if it contains any,
/// otherwise each character is a letter.
pub fn parse_phrase(text: &str) -> Result<ParsedPhrase> {
    let body: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join(" ");
    let mut words: Vec<Vec<String>> = Vec::new();
    let mut raw_bindings: Vec<(String, String)> = Vec::new();
    for segment in body.split('|') {
        let segment = segment.trim();
        if segment.contains('=') {
            for token in segment.split_whitespace() {
                let (name, value) = token.split_once('=').ok_or_else(|| {
                    Error::Parse(format!("expected name=value, found {}", token))
                })?;
                if name.is_empty() || value.is_empty() {
                    return Err(Error::Parse(format!("malformed binding {}", token)));
                }
                raw_bindings.push((name.to_string(), value.to_string()));
            }
        } else if segment == "-" {
            words.push(Vec::new());
        } else if !segment.is_empty() {
            let tokens: Vec<String> = if segment.split_whitespace().nth(1).is_some() {
                segment.split_whitespace().map(str::to_string).collect()
            } else {
                segment.chars().map(String::from).collect()
            };
            words.push(tokens);
        }
    }
    let star = raw_bindings
        .first()
        .map(|(_, v)| <StarValue as LetterValue>::parse(v).is_some())
        .unwrap_or(false);
    if star {
        let bindings = typed_bindings::<StarValue>(&raw_bindings)?;
        Ok(ParsedPhrase::Star(Nanophrase::from_parts(words, bindings)?))
    } else {
        let bindings = typed_bindings::<i8>(&raw_bindings)?;
        Ok(ParsedPhrase::Signs(Nanophrase::from_parts(words, bindings)?))
    }
}

fn typed_bindings<V: LetterValue>(raw: &[(String, String)]) -> Result<Vec<(String, V)>> {
    raw.iter()
        .map(|(name, value)| {
            V::parse(value)
                .map(|v| (name.clone(), v))
                .ok_or_else(|| Error::Parse(format!("bad letter value {}", value)))
        })
        .collect()
}

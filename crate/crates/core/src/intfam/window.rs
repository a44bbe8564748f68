use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WindowParseError {
    #[error("missing `H=<int>` header")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

/// Dense membership of a subset of `[0, horizon)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "WindowRepr", from = "WindowRepr")]
pub struct IntWindowSet {
    horizon: usize,
    words: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct WindowRepr {
    horizon: usize,
    members: Vec<usize>,
}

impl From<IntWindowSet> for WindowRepr {
    fn from(w: IntWindowSet) -> Self {
        WindowRepr { horizon: w.horizon, members: w.iter().collect() }
    }
}

impl From<WindowRepr> for IntWindowSet {
    fn from(r: WindowRepr) -> Self {
        IntWindowSet::from_members(r.horizon, r.members)
    }
}

const BITS: usize = 64;

impl IntWindowSet {
    pub fn empty(horizon: usize) -> Self {
        IntWindowSet { horizon, words: vec![0; horizon.div_ceil(BITS)] }
    }

    pub fn full(horizon: usize) -> Self {
        let mut w = IntWindowSet { horizon, words: vec![!0; horizon.div_ceil(BITS)] };
        w.trim();
        w
    }

    pub fn from_fn(horizon: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut w = Self::empty(horizon);
        for n in 0..horizon {
            if f(n) {
                w.insert(n);
            }
        }
        w
    }

    /// Members at or beyond the horizon are dropped.
    pub fn from_members(horizon: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut w = Self::empty(horizon);
        for n in members {
            if n < horizon {
                w.insert(n);
            }
        }
        w
    }

    fn trim(&mut self) {
        let rem = self.horizon % BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn insert(&mut self, n: usize) {
        assert!(n < self.horizon, "{n} outside window [0,{})", self.horizon);
        self.words[n / BITS] |= 1 << (n % BITS);
    }

    pub fn remove(&mut self, n: usize) {
        if n < self.horizon {
            self.words[n / BITS] &= !(1 << (n % BITS));
        }
    }

    pub fn contains(&self, n: usize) -> bool {
        n < self.horizon && self.words[n / BITS] >> (n % BITS) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// First member `>= from`.
    pub fn next_member(&self, from: usize) -> Option<usize> {
        self.next_with(from, false)
    }

    /// First non-member `>= from` inside the window.
    pub fn next_non_member(&self, from: usize) -> Option<usize> {
        self.next_with(from, true)
    }

    fn next_with(&self, from: usize, invert: bool) -> Option<usize> {
        if from >= self.horizon {
            return None;
        }
        let mut idx = from / BITS;
        let mut word = self.words[idx] ^ if invert { !0 } else { 0 };
        word &= !0u64 << (from % BITS);
        loop {
            if word != 0 {
                let n = idx * BITS + word.trailing_zeros() as usize;
                return (n < self.horizon).then_some(n);
            }
            idx += 1;
            if idx >= self.words.len() {
                return None;
            }
            word = self.words[idx] ^ if invert { !0 } else { 0 };
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut next = self.next_member(0);
        std::iter::from_fn(move || {
            let n = next?;
            next = self.next_member(n + 1);
            Some(n)
        })
    }

    /// Maximal runs of members as `(start, length)`.
    pub fn runs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.maximal_runs(false)
    }

    /// Maximal runs of non-members inside the window as `(start, length)`.
    pub fn gaps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.maximal_runs(true)
    }

    fn maximal_runs(&self, of_non_members: bool) -> impl Iterator<Item = (usize, usize)> + '_ {
        let mut pos = 0usize;
        std::iter::from_fn(move || {
            let start = self.next_with(pos, of_non_members)?;
            let end = self.next_with(start, !of_non_members).unwrap_or(self.horizon);
            pos = end;
            Some((start, end - start))
        })
    }

    pub fn longest_run(&self) -> usize {
        self.runs().map(|(_, l)| l).max().unwrap_or(0)
    }

    pub fn longest_gap(&self) -> usize {
        self.gaps().map(|(_, l)| l).max().unwrap_or(0)
    }

    fn zip_words(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.horizon, other.horizon, "window horizons differ");
        let mut out = IntWindowSet {
            horizon: self.horizon,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        };
        out.trim();
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & !b)
    }

    /// Complement within `[0, horizon)`.
    pub fn complement(&self) -> Self {
        let mut out = IntWindowSet {
            horizon: self.horizon,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.trim();
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        assert_eq!(self.horizon, other.horizon, "window horizons differ");
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        assert_eq!(self.horizon, other.horizon, "window horizons differ");
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & b == 0)
    }

    /// `{n + k}` restricted to the same window; negative `k` drops members below `|k|`.
    pub fn translate(&self, k: i64) -> Self {
        let mut out = Self::empty(self.horizon);
        for n in self.iter() {
            let m = n as i64 + k;
            if m >= 0 && (m as usize) < self.horizon {
                out.insert(m as usize);
            }
        }
        out
    }

    /// `{n < horizon : start + n in self}`.
    pub fn offset_window(&self, start: usize, horizon: usize) -> Self {
        let mut out = Self::empty(horizon);
        let (base, shift) = (start / BITS, start % BITS);
        for i in 0..out.words.len() {
            let lo = self.words.get(base + i).copied().unwrap_or(0);
            let hi = self.words.get(base + i + 1).copied().unwrap_or(0);
            out.words[i] = if shift == 0 { lo } else { lo >> shift | hi << (BITS - shift) };
        }
        out.trim();
        out
    }

    /// `{n : pattern[n mod p]}` on `[0, horizon)`.
    pub fn periodic(horizon: usize, pattern: &[bool]) -> Self {
        assert!(!pattern.is_empty(), "empty period pattern");
        Self::from_fn(horizon, |n| pattern[n % pattern.len()])
    }

    pub fn union_with(&mut self, other: &Self) {
        assert_eq!(self.horizon, other.horizon, "window horizons differ");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        assert_eq!(self.horizon, other.horizon, "window horizons differ");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Restriction to `[0, horizon)` for a smaller horizon.
    pub fn truncate(&self, horizon: usize) -> Self {
        assert!(horizon <= self.horizon);
        Self::from_members(horizon, self.iter().take_while(|&n| n < horizon))
    }

    /// `{n : offset + step*n in self}` on `[0, horizon)`.
    pub fn subsample(&self, step: usize, offset: usize, horizon: usize) -> Self {
        Self::from_fn(horizon, |n| self.contains(offset + step * n))
    }

    /// Text form: header `H=<int>` then one member per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("H={}\n", self.horizon);
        for n in self.iter() {
            writeln!(out, "{n}").expect("write to string");
        }
        out
    }

    /// Accepts explicit members and `start:length` run lines, freely mixed.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse_text(text: &str) -> Result<Self, WindowParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, header) = lines.next().ok_or(WindowParseError::MissingHeader)?;
        let horizon: usize = header
            .strip_prefix("H=")
            .ok_or(WindowParseError::MissingHeader)?
            .trim()
            .parse()
            .map_err(|_| WindowParseError::Line { line: line_no, message: "bad horizon".into() })?;
        let mut w = Self::empty(horizon);
        for (line, text) in lines {
            let bad = |message: &str| WindowParseError::Line { line, message: message.into() };
            let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("not an integer"));
            let (start, len) = match text.split_once(':') {
                Some((s, l)) => (parse(s)?, parse(l)?),
                None => (parse(text)?, 1),
            };
            if start + len > horizon {
                return Err(bad("member outside the window"));
            }
            for n in start..start + len {
                w.insert(n);
            }
        }
        Ok(w)
    }
}

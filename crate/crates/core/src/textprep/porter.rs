//! Porter's suffix-stripping stemmer.
//!
//! Follows the behaviour of Martin Porter's reference C implementation,
//! including its two published departures from the 1980 description
//! (`-bli` maps to `-ble` and `-logi` to `-log` in step 2) so the output agrees
//! with the reference vocabulary/output test files.

use alloc::string::String;
use alloc::vec::Vec;

/// Stems a lowercase word. Words that are not entirely ASCII lowercase letters
/// (numbers, mixed tokens, non-Latin text) are returned unchanged.
pub fn porter_stem(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return String::from(word);
    }
    let mut stemmer = Stemmer {
        b: word.as_bytes().to_vec(),
        k: word.len() - 1,
        j: 0,
    };
    stemmer.step1ab();
    if stemmer.k > 0 {
        stemmer.step1c();
        stemmer.step2();
        stemmer.step3();
        stemmer.step4();
        stemmer.step5();
    }
    stemmer.b.truncate(stemmer.k + 1);
    // Only ASCII bytes were ever written.
    String::from_utf8(stemmer.b).unwrap_or_default()
}

/// `(suffix, replacement)` pairs tried in order.
type SuffixRules = &'static [(&'static [u8], &'static [u8])];

struct Stemmer {
    b: Vec<u8>,
    /// Index of the last letter of the current word.
    k: usize,
    /// End of the stem preceding a matched suffix; `-1` is encoded as `usize::MAX`.
    j: usize,
}

impl Stemmer {
    fn cons(&self, i: usize) -> bool {
        match self.b[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.cons(i - 1),
            _ => true,
        }
    }

    /// Number of VC sequences in `b[0..=j]`.
    fn m(&self) -> usize {
        let end = self.j.wrapping_add(1);
        let mut n = 0;
        let mut i = 0;
        loop {
            if i >= end {
                return n;
            }
            if !self.cons(i) {
                break;
            }
            i += 1;
        }
        i += 1;
        loop {
            loop {
                if i >= end {
                    return n;
                }
                if self.cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
            n += 1;
            loop {
                if i >= end {
                    return n;
                }
                if !self.cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
        }
    }

    fn vowel_in_stem(&self) -> bool {
        (0..self.j.wrapping_add(1)).any(|i| !self.cons(i))
    }

    fn double_cons(&self, j: usize) -> bool {
        j >= 1 && self.b[j] == self.b[j - 1] && self.cons(j)
    }

    /// consonant-vowel-consonant ending at `i`, last consonant not w, x or y.
    fn cvc(&self, i: usize) -> bool {
        if i < 2 || !self.cons(i) || self.cons(i - 1) || !self.cons(i - 2) {
            return false;
        }
        !matches!(self.b[i], b'w' | b'x' | b'y')
    }

    fn ends(&mut self, suffix: &[u8]) -> bool {
        let len = suffix.len();
        if len > self.k + 1 {
            return false;
        }
        if &self.b[self.k + 1 - len..=self.k] != suffix {
            return false;
        }
        self.j = (self.k + 1 - len).wrapping_sub(1);
        true
    }

    fn set_to(&mut self, s: &[u8]) {
        let start = self.j.wrapping_add(1);
        self.b.truncate(start);
        self.b.extend_from_slice(s);
        self.k = start + s.len() - 1;
    }

    fn replace_if_measured(&mut self, s: &[u8]) {
        if self.m() > 0 {
            self.set_to(s);
        }
    }

    /// Plurals and -ed / -ing.
    fn step1ab(&mut self) {
        if self.b[self.k] == b's' {
            if self.ends(b"sses") {
                self.k -= 2;
            } else if self.ends(b"ies") {
                self.set_to(b"i");
            } else if self.b[self.k - 1] != b's' {
                self.k -= 1;
            }
        }
        self.b.truncate(self.k + 1);
        if self.ends(b"eed") {
            if self.m() > 0 {
                self.k -= 1;
            }
        } else if (self.ends(b"ed") || self.ends(b"ing")) && self.vowel_in_stem() {
            self.k = self.j;
            self.b.truncate(self.k + 1);
            if self.ends(b"at") {
                self.set_to(b"ate");
            } else if self.ends(b"bl") {
                self.set_to(b"ble");
            } else if self.ends(b"iz") {
                self.set_to(b"ize");
            } else if self.double_cons(self.k) {
                self.k -= 1;
                if matches!(self.b[self.k], b'l' | b's' | b'z') {
                    self.k += 1;
                }
            } else if self.m() == 1 && self.cvc(self.k) {
                self.set_to(b"e");
            }
        }
        self.b.truncate(self.k + 1);
    }

    /// Terminal y to i when there is another vowel in the stem.
    fn step1c(&mut self) {
        if self.ends(b"y") && self.vowel_in_stem() {
            self.b[self.k] = b'i';
        }
    }

    fn step2(&mut self) {
        const RULES: &[(u8, SuffixRules)] = &[
            (b'a', &[(b"ational", b"ate"), (b"tional", b"tion")]),
            (b'c', &[(b"enci", b"ence"), (b"anci", b"ance")]),
            (b'e', &[(b"izer", b"ize")]),
            (
                b'l',
                &[
                    (b"bli", b"ble"),
                    (b"alli", b"al"),
                    (b"entli", b"ent"),
                    (b"eli", b"e"),
                    (b"ousli", b"ous"),
                ],
            ),
            (
                b'o',
                &[(b"ization", b"ize"), (b"ation", b"ate"), (b"ator", b"ate")],
            ),
            (
                b's',
                &[
                    (b"alism", b"al"),
                    (b"iveness", b"ive"),
                    (b"fulness", b"ful"),
                    (b"ousness", b"ous"),
                ],
            ),
            (
                b't',
                &[(b"aliti", b"al"), (b"iviti", b"ive"), (b"biliti", b"ble")],
            ),
            (b'g', &[(b"logi", b"log")]),
        ];
        self.apply_first(RULES, self.b[self.k - 1]);
    }

    fn step3(&mut self) {
        const RULES: &[(u8, SuffixRules)] = &[
            (
                b'e',
                &[(b"icate", b"ic"), (b"ative", b""), (b"alize", b"al")],
            ),
            (b'i', &[(b"iciti", b"ic")]),
            (b'l', &[(b"ical", b"ic"), (b"ful", b"")]),
            (b's', &[(b"ness", b"")]),
        ];
        self.apply_first(RULES, self.b[self.k]);
    }

    /// The first matching suffix in the group selected by `key` is replaced if
    /// the stem has m > 0; no other suffix in the group is tried.
    fn apply_first(&mut self, rules: &[(u8, SuffixRules)], key: u8) {
        let Some((_, group)) = rules.iter().find(|(c, _)| *c == key) else {
            return;
        };
        for (suffix, replacement) in group.iter() {
            if self.ends(suffix) {
                self.replace_if_measured(replacement);
                return;
            }
        }
    }

    fn step4(&mut self) {
        let matched = match self.b[self.k - 1] {
            b'a' => self.ends(b"al"),
            b'c' => self.ends(b"ance") || self.ends(b"ence"),
            b'e' => self.ends(b"er"),
            b'i' => self.ends(b"ic"),
            b'l' => self.ends(b"able") || self.ends(b"ible"),
            b'n' => {
                self.ends(b"ant") || self.ends(b"ement") || self.ends(b"ment") || self.ends(b"ent")
            }
            b'o' => {
                (self.ends(b"ion")
                    && self.j != usize::MAX
                    && matches!(self.b[self.j], b's' | b't'))
                    || self.ends(b"ou")
            }
            b's' => self.ends(b"ism"),
            b't' => self.ends(b"ate") || self.ends(b"iti"),
            b'u' => self.ends(b"ous"),
            b'v' => self.ends(b"ive"),
            b'z' => self.ends(b"ize"),
            _ => false,
        };
        if matched && self.m() > 1 {
            self.k = self.j;
            self.b.truncate(self.k + 1);
        }
    }

    /// Final -e and -ll.
    fn step5(&mut self) {
        let k = self.k;
        self.j = k;
        if self.b[k] == b'e' {
            let a = self.m();
            if a > 1 || (a == 1 && !self.cvc(k - 1)) {
                self.k -= 1;
            }
        }
        if self.b[self.k] == b'l' && self.double_cons(self.k) && self.m() > 1 {
            self.k -= 1;
        }
    }
}

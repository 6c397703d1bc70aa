//! Seeded synthetic corpora for fixtures and desk-scale replications.
//!
//! Documents are drawn from a Zipf-weighted background vocabulary. Relevant
//! documents additionally carry a few words from a small planted set; a
//! configurable fraction of irrelevant documents leak one planted word, and a
//! fraction of relevant documents carry none, so rankings are imperfect.
//! Every generated word is its own Porter stem, so stemming never merges two
//! words.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{ClassDistribution, Corpus, Document, Label, Split};
use crate::textprep::porter_stem;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub name: String,
    pub counts: ClassDistribution,
    pub planted_words: usize,
    pub background_words: usize,
    /// Inclusive range of background words per document.
    pub length: (usize, usize),
    /// Inclusive range of planted words in a signal-bearing relevant document.
    pub planted_per_document: (usize, usize),
    /// Probability that a relevant document carries planted words at all.
    pub relevant_signal: f64,
    /// Probability that an irrelevant document carries one planted word.
    pub negative_leak: f64,
    /// Background words enriched in relevant documents.
    pub topic_words: usize,
    /// Probability that a background draw in a relevant document is replaced
    /// by a uniformly chosen topic word.
    pub topic_rate: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    /// 2,000 documents at 15% prevalence, split 75/25, with 20 planted words.
    pub fn planted_signal(seed: u64) -> Self {
        SyntheticSpec {
            name: String::from("planted-signal"),
            counts: ClassDistribution {
                training_relevant: 225,
                training_not_relevant: 1275,
                validation_relevant: 75,
                validation_not_relevant: 425,
            },
            planted_words: 20,
            background_words: 3000,
            length: (15, 35),
            planted_per_document: (1, 3),
            relevant_signal: 0.9,
            negative_leak: 0.05,
            topic_words: 0,
            topic_rate: 0.0,
            seed,
        }
    }

    /// Short documents with the given class counts, for format fixtures.
    pub fn with_counts(name: &str, counts: ClassDistribution, seed: u64) -> Self {
        SyntheticSpec {
            name: String::from(name),
            counts,
            length: (4, 12),
            ..Self::planted_signal(seed)
        }
    }

    /// 1:10 imbalance with a diffuse signal: no planted words, 200 topic
    /// words enriched in relevant documents.
    pub fn imbalanced_topical(seed: u64) -> Self {
        SyntheticSpec {
            name: String::from("imbalanced-topical"),
            counts: ClassDistribution {
                training_relevant: 150,
                training_not_relevant: 1500,
                validation_relevant: 50,
                validation_not_relevant: 500,
            },
            planted_words: 0,
            planted_per_document: (0, 0),
            relevant_signal: 0.0,
            negative_leak: 0.0,
            topic_words: 200,
            topic_rate: 0.1,
            ..Self::planted_signal(seed)
        }
    }

    /// Class counts of reference project 1.
    pub fn project_one(seed: u64) -> Self {
        Self::with_counts(
            "project-1",
            ClassDistribution {
                training_relevant: 1126,
                training_not_relevant: 2897,
                validation_relevant: 206,
                validation_not_relevant: 1368,
            },
            seed,
        )
    }

    pub fn project_three(seed: u64) -> Self {
        Self::with_counts(
            "project-3",
            ClassDistribution {
                training_relevant: 5743,
                training_not_relevant: 6540,
                validation_relevant: 801,
                validation_not_relevant: 788,
            },
            seed,
        )
    }

    fn validate(&self) -> Result<()> {
        let probability = |name, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::param(name, "must be a probability in [0, 1]"))
            }
        };
        probability("relevant_signal", self.relevant_signal)?;
        probability("negative_leak", self.negative_leak)?;
        probability("topic_rate", self.topic_rate)?;
        if self.topic_words > self.background_words {
            return Err(Error::param("topic_words", "cannot exceed background_words"));
        }
        if self.length.0 > self.length.1 || self.planted_per_document.0 > self.planted_per_document.1 {
            return Err(Error::param("length", "range minimum exceeds maximum"));
        }
        if self.background_words == 0 {
            return Err(Error::param("background_words", "must be at least 1"));
        }
        if self.planted_words == 0 && (self.relevant_signal > 0.0 || self.negative_leak > 0.0) {
            return Err(Error::param("planted_words", "signal requires planted words"));
        }
        Ok(())
    }
}

const ONSETS: &[&str] = &[
    "b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "t", "v", "z", "br", "dr", "gr", "kr", "pl", "tr",
];
const NUCLEI: &[&str] = &["a", "o", "u", "i"];
const CODAS: &[&str] = &["b", "d", "g", "k", "m", "n", "p", "t", "x", "z"];

/// `count` distinct words, each equal to its own Porter stem.
pub fn word_list(count: usize, rng: &mut impl Rng) -> Vec<String> {
    let mut seen = hashbrown::HashSet::new();
    let mut words = Vec::with_capacity(count);
    while words.len() < count {
        let syllables = rng.random_range(2..=3);
        let mut w = String::new();
        for _ in 0..syllables {
            w.push_str(ONSETS[rng.random_range(0..ONSETS.len())]);
            w.push_str(NUCLEI[rng.random_range(0..NUCLEI.len())]);
        }
        w.push_str(CODAS[rng.random_range(0..CODAS.len())]);
        if porter_stem(&w) == w && seen.insert(w.clone()) {
            words.push(w);
        }
    }
    words
}

/// Generates the corpus: training documents first, then validation, each
/// split in a seeded shuffled label order.
pub fn generate(spec: &SyntheticSpec) -> Result<Corpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let words = word_list(spec.background_words + spec.planted_words, &mut rng);
    let (planted, background) = words.split_at(spec.planted_words);
    let zipf = WeightedIndex::new((1..=background.len()).map(|r| 1.0 / r as f64))
        .map_err(|_| Error::param("background_words", "invalid Zipf weights"))?;
    let topic: Vec<usize> = if spec.topic_words == 0 {
        Vec::new()
    } else {
        rand::seq::index::sample(&mut rng, background.len(), spec.topic_words).into_vec()
    };

    let c = &spec.counts;
    let mut docs = Vec::with_capacity(c.total());
    for (split, relevant, irrelevant) in [
        (Split::Training, c.training_relevant, c.training_not_relevant),
        (Split::Validation, c.validation_relevant, c.validation_not_relevant),
    ] {
        let mut labels: Vec<bool> = core::iter::repeat_n(true, relevant)
            .chain(core::iter::repeat_n(false, irrelevant))
            .collect();
        rand::seq::SliceRandom::shuffle(labels.as_mut_slice(), &mut rng);
        for is_relevant in labels {
            let len = rng.random_range(spec.length.0..=spec.length.1);
            let mut tokens: Vec<&str> = (0..len)
                .map(|_| {
                    let i = if is_relevant && !topic.is_empty() && rng.random_bool(spec.topic_rate) {
                        topic[rng.random_range(0..topic.len())]
                    } else {
                        zipf.sample(&mut rng)
                    };
                    background[i].as_str()
                })
                .collect();
            let plant = if is_relevant {
                if rng.random_bool(spec.relevant_signal) {
                    rng.random_range(spec.planted_per_document.0..=spec.planted_per_document.1)
                } else {
                    0
                }
            } else {
                usize::from(rng.random_bool(spec.negative_leak))
            };
            for _ in 0..plant {
                let at = rng.random_range(0..=tokens.len());
                tokens.insert(at, planted[rng.random_range(0..planted.len())].as_str());
            }
            let label = if is_relevant { Label::Relevant } else { Label::NotRelevant };
            let prefix = if split == Split::Training { "t" } else { "v" };
            let id = format!("{prefix}{:05}", docs.len());
            docs.push(Document::new(id, tokens.join(" "), label, split));
        }
    }
    Corpus::new(spec.name.clone(), docs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::dataset_stats;
    use crate::textprep::tokenize;

    #[test]
    fn project_one_counts() {
        let corpus = generate(&SyntheticSpec::project_one(1)).unwrap();
        let d = dataset_stats(&corpus);
        assert_eq!(
            (d.training_relevant, d.training_not_relevant, d.validation_relevant, d.validation_not_relevant),
            (1126, 2897, 206, 1368)
        );
    }

    #[test]
    fn project_three_counts() {
        let d = dataset_stats(&generate(&SyntheticSpec::project_three(1)).unwrap());
        assert_eq!(
            (d.training_relevant, d.training_not_relevant, d.validation_relevant, d.validation_not_relevant),
            (5743, 6540, 801, 788)
        );
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate(&SyntheticSpec::planted_signal(3)).unwrap();
        let b = generate(&SyntheticSpec::planted_signal(3)).unwrap();
        let c = generate(&SyntheticSpec::planted_signal(4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn planted_words_mark_relevance() {
        let spec = SyntheticSpec {
            relevant_signal: 1.0,
            negative_leak: 0.0,
            ..SyntheticSpec::planted_signal(9)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let planted: hashbrown::HashSet<String> = word_list(spec.background_words + spec.planted_words, &mut rng)
            .into_iter()
            .take(spec.planted_words)
            .collect();
        let corpus = generate(&spec).unwrap();
        assert_eq!(corpus.len(), 2000);
        let relevant = corpus.documents().iter().filter(|d| d.label.is_relevant()).count();
        assert_eq!(relevant, 300);
        for doc in corpus.documents() {
            let has = tokenize(&doc.text).iter().any(|t| planted.contains(t));
            assert_eq!(has, doc.label.is_relevant(), "{}", doc.id);
        }
    }

    #[test]
    fn topical_variant_raises_topic_share_in_relevant_documents() {
        let spec = SyntheticSpec::imbalanced_topical(4);
        let corpus = generate(&spec).unwrap();
        let d = dataset_stats(&corpus);
        assert_eq!(
            (d.training_relevant, d.training_not_relevant, d.validation_relevant, d.validation_not_relevant),
            (150, 1500, 50, 500)
        );
        // Replays the generator's draws to recover the topic words.
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let words = word_list(spec.background_words, &mut rng);
        let topic: hashbrown::HashSet<&str> = rand::seq::index::sample(&mut rng, words.len(), spec.topic_words)
            .into_iter()
            .map(|i| words[i].as_str())
            .collect();
        let share = |relevant: bool| {
            let (mut hits, mut total) = (0usize, 0usize);
            for doc in corpus.documents().iter().filter(|d| d.label.is_relevant() == relevant) {
                for t in tokenize(&doc.text) {
                    total += 1;
                    hits += usize::from(topic.contains(t.as_str()));
                }
            }
            hits as f64 / total as f64
        };
        let (pos, neg) = (share(true), share(false));
        assert!(pos - neg > 0.07, "relevant {pos}, other {neg}");
    }

    #[test]
    fn words_are_fixed_points_of_the_stemmer() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let words = word_list(5000, &mut rng);
        let unique: hashbrown::HashSet<_> = words.iter().collect();
        assert_eq!(unique.len(), 5000);
        assert!(words.iter().all(|w| porter_stem(w) == *w));
    }

    #[test]
    fn rejects_bad_probabilities() {
        let spec = SyntheticSpec {
            negative_leak: 1.5,
            ..SyntheticSpec::planted_signal(0)
        };
        assert!(generate(&spec).is_err());
    }
}

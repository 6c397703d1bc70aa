//! Labeled document collections.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use hashbrown::HashSet;

use crate::{Error, Result};

/// Binary relevance label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Relevant,
    NotRelevant,
}

impl Label {
    pub const fn as_str(self) -> &'static str {
        match self {
            Label::Relevant => "relevant",
            Label::NotRelevant => "not_relevant",
        }
    }

    pub const fn is_relevant(self) -> bool {
        matches!(self, Label::Relevant)
    }

    /// `+1` for relevant, `-1` otherwise.
    pub const fn sign(self) -> f64 {
        match self {
            Label::Relevant => 1.0,
            Label::NotRelevant => -1.0,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relevant" => Ok(Label::Relevant),
            "not_relevant" => Ok(Label::NotRelevant),
            other => Err(Error::param(
                "label",
                alloc::format!("expected `relevant` or `not_relevant`, got `{other}`"),
            )),
        }
    }
}

/// Which partition a document belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Training,
    Validation,
}

impl Split {
    pub const fn as_str(self) -> &'static str {
        match self {
            Split::Training => "training",
            Split::Validation => "validation",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "training" => Ok(Split::Training),
            "validation" => Ok(Split::Validation),
            other => Err(Error::param(
                "split",
                alloc::format!("expected `training` or `validation`, got `{other}`"),
            )),
        }
    }
}

/// Anything carrying a binary label. Lets down-sampling work on documents as
/// well as on their preprocessed forms.
pub trait Labeled {
    fn label(&self) -> Label;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub label: Label,
    pub split: Split,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>, label: Label, split: Split) -> Self {
        Document {
            id: id.into(),
            text: text.into(),
            label,
            split,
        }
    }
}

impl Labeled for Label {
    fn label(&self) -> Label {
        *self
    }
}

impl Labeled for Document {
    fn label(&self) -> Label {
        self.label
    }
}

/// An ordered, immutable collection of documents with unique ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    name: String,
    documents: Vec<Document>,
}

impl Corpus {
    /// Builds a corpus, rejecting empty or repeated ids. Document order is kept.
    pub fn new(name: impl Into<String>, documents: Vec<Document>) -> Result<Self> {
        {
            let mut seen = HashSet::with_capacity(documents.len());
            for doc in &documents {
                if doc.id.is_empty() {
                    return Err(Error::EmptyId);
                }
                if !seen.insert(doc.id.as_str()) {
                    return Err(Error::DuplicateId(doc.id.clone()));
                }
            }
        }
        Ok(Corpus {
            name: name.into(),
            documents,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn training(&self) -> impl Iterator<Item = &Document> {
        self.documents
            .iter()
            .filter(|d| d.split == Split::Training)
    }

    pub fn validation(&self) -> impl Iterator<Item = &Document> {
        self.documents
            .iter()
            .filter(|d| d.split == Split::Validation)
    }

    /// Fails unless the training split has both labels.
    pub fn ensure_trainable(&self) -> Result<()> {
        let stats = dataset_stats(self);
        if stats.training_relevant == 0 {
            return Err(Error::MissingClass("relevant"));
        }
        if stats.training_not_relevant == 0 {
            return Err(Error::MissingClass("not_relevant"));
        }
        Ok(())
    }
}

/// Document counts per (split, label) cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassDistribution {
    pub training_relevant: usize,
    pub training_not_relevant: usize,
    pub validation_relevant: usize,
    pub validation_not_relevant: usize,
}

impl ClassDistribution {
    pub fn total(&self) -> usize {
        self.training_relevant
            + self.training_not_relevant
            + self.validation_relevant
            + self.validation_not_relevant
    }
}

pub fn dataset_stats(corpus: &Corpus) -> ClassDistribution {
    let mut stats = ClassDistribution::default();
    for doc in corpus.documents() {
        let cell = match (doc.split, doc.label) {
            (Split::Training, Label::Relevant) => &mut stats.training_relevant,
            (Split::Training, Label::NotRelevant) => &mut stats.training_not_relevant,
            (Split::Validation, Label::Relevant) => &mut stats.validation_relevant,
            (Split::Validation, Label::NotRelevant) => &mut stats.validation_not_relevant,
        };
        *cell += 1;
    }
    stats
}

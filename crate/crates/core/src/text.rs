//! Turning raw text into storable sequences: sentence splitting, token
//! cleanup, stop-word removal, length filtering, seeded sentence selection,
//! and virtual-object encoding for repeated tokens.

use std::collections::{HashMap, HashSet};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SsakgError};
use crate::graph::{Sequence, SymbolId};

/// Bijective token <-> id map with ids dense in `0..len`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    to_id: HashMap<String, SymbolId>,
    tokens: Vec<String>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Vocabulary::default()
    }

    /// Id of `token`, assigning the next free id on first sight.
    pub fn intern(&mut self, token: &str) -> SymbolId {
        if let Some(&id) = self.to_id.get(token) {
            return id;
        }
        let id = SymbolId(self.tokens.len() as u32);
        self.tokens.push(token.to_string());
        self.to_id.insert(token.to_string(), id);
        id
    }

    pub fn id_of(&self, token: &str) -> Option<SymbolId> {
        self.to_id.get(token).copied()
    }

    pub fn token(&self, id: SymbolId) -> Option<&str> {
        self.tokens.get(id.index()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }
}

/// Parameters of one corpus preparation run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub corpus_path: PathBuf,
    pub stopword_path: PathBuf,
    /// Sentence length bounds counted after filtering.
    pub min_len: usize,
    pub max_len: usize,
    /// Sentences to select uniformly at random among the survivors.
    pub count: usize,
    pub seed: u64,
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        if self.min_len < 2 {
            return Err(SsakgError::InvalidParams(format!(
                "minimum sentence length must be at least 2, got {}",
                self.min_len
            )));
        }
        if self.min_len > self.max_len {
            return Err(SsakgError::InvalidParams(format!(
                "length bounds inverted: {} > {}",
                self.min_len, self.max_len
            )));
        }
        if self.count == 0 {
            return Err(SsakgError::InvalidParams("sentence count must be >= 1".into()));
        }
        Ok(())
    }
}

/// Loads a stop-word file: UTF-8, one lowercase word per line, `#` comments.
pub fn load_stopwords<P: AsRef<Path>>(path: P) -> Result<HashSet<String>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_stopwords(&text))
}

fn parse_stopwords(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

/// Splits on terminal punctuation, one entry per sentence.
fn split_sentences(text: &str) -> impl Iterator<Item = &str> {
    text.split(['.', '!', '?']).filter(|s| !s.trim().is_empty())
}

/// Lowercased alphabetic-only tokens of one sentence, stop-words removed.
///
/// Tokens are whitespace-delimited; non-alphabetic characters are stripped
/// from each token and tokens left empty are dropped.
fn tokenize(sentence: &str, stopwords: &HashSet<String>) -> Vec<String> {
    sentence
        .split_whitespace()
        .filter_map(|raw| {
            let cleaned: String = raw
                .to_lowercase()
                .chars()
                .filter(|c| c.is_alphabetic())
                .collect();
            if cleaned.is_empty() || stopwords.contains(&cleaned) {
                None
            } else {
                Some(cleaned)
            }
        })
        .collect()
}

/// Full preparation pipeline.
///
/// Returns the selected sentences as token lists (corpus order) and the
/// vocabulary over them in first-occurrence order. Repeated tokens inside a
/// sentence survive here; encode them with [`encode_virtual`] before storage.
pub fn prepare_corpus(spec: &CorpusSpec) -> Result<(Vec<Vec<String>>, Vocabulary)> {
    spec.validate()?;
    let raw = std::fs::read(&spec.corpus_path)?;
    let text = String::from_utf8(raw).map_err(|e| {
        SsakgError::FormatError(format!(
            "corpus {} is not valid UTF-8: {e}",
            spec.corpus_path.display()
        ))
    })?;
    let stopwords = load_stopwords(&spec.stopword_path)?;

    let survivors: Vec<Vec<String>> = split_sentences(&text)
        .map(|s| tokenize(s, &stopwords))
        .filter(|toks| (spec.min_len..=spec.max_len).contains(&toks.len()))
        .collect();
    if survivors.len() < spec.count {
        return Err(SsakgError::CorpusTooSmall {
            survivors: survivors.len(),
            requested: spec.count,
        });
    }

    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let mut picked: Vec<usize> =
        rand::seq::index::sample(&mut rng, survivors.len(), spec.count).into_vec();
    picked.sort_unstable();

    let mut vocab = Vocabulary::new();
    let mut sentences = Vec::with_capacity(spec.count);
    for i in picked {
        let sent = survivors[i].clone();
        for tok in &sent {
            vocab.intern(tok);
        }
        sentences.push(sent);
    }
    Ok((sentences, vocab))
}

/// Maps tokens to symbols, renaming the k-th occurrence (k >= 2) of a token
/// to the virtual token `token#k` so the result has distinct elements. The
/// vocabulary grows as needed.
pub fn encode_virtual(tokens: &[String], vocab: &mut Vocabulary) -> Sequence {
    assert!(!tokens.is_empty(), "cannot encode an empty token list");
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let elements = tokens
        .iter()
        .map(|tok| {
            let k = seen.entry(tok.as_str()).or_insert(0);
            *k += 1;
            if *k == 1 {
                vocab.intern(tok)
            } else {
                vocab.intern(&format!("{tok}#{k}"))
            }
        })
        .collect();
    Sequence::new(elements).expect("virtualized tokens are distinct")
}

/// Token frequencies over all sentences, sorted by descending count, ties
/// alphabetical. Counts sum to the total token count.
pub fn word_frequencies(sentences: &[Vec<String>]) -> Vec<(String, usize)> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for sent in sentences {
        for tok in sent {
            *counts.entry(tok).or_insert(0) += 1;
        }
    }
    let mut table: Vec<(String, usize)> = counts
        .into_iter()
        .map(|(t, c)| (t.to_string(), c))
        .collect();
    table.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    table
}

/// Prepared-sentences file: `{"vocab": [token,...], "sentences": [[id,...],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreparedCorpus {
    pub vocab: Vec<String>,
    pub sentences: Vec<Vec<u32>>,
}

impl PreparedCorpus {
    pub fn from_sentences(sentences: &[Vec<String>], vocab: &Vocabulary) -> Result<Self> {
        let ids = sentences
            .iter()
            .map(|sent| {
                sent.iter()
                    .map(|tok| {
                        vocab.id_of(tok).map(|s| s.0).ok_or_else(|| {
                            SsakgError::FormatError(format!("token '{tok}' missing from vocabulary"))
                        })
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PreparedCorpus {
            vocab: vocab.tokens().to_vec(),
            sentences: ids,
        })
    }

    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer(&mut w, self)?;
        w.flush()?;
        Ok(())
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stopfile(words: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "{words}").unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn tokenizer_strips_punctuation_and_stopwords() {
        let stop: HashSet<String> = ["the".to_string()].into();
        assert_eq!(tokenize("The cat, the hat", &stop), vec!["cat", "hat"]);
        assert_eq!(
            tokenize("Numbers 123 mix3d in", &HashSet::new()),
            vec!["numbers", "mixd", "in"]
        );
    }

    #[test]
    fn empty_stopword_file_only_normalizes() {
        let stop = HashSet::new();
        assert_eq!(
            tokenize("The Cat, The Hat", &stop),
            vec!["the", "cat", "the", "hat"]
        );
    }

    #[test]
    fn stopword_parsing_handles_comments() {
        let set = parse_stopwords("# common words\nthe\nand\n\n  of  \n");
        assert_eq!(set.len(), 3);
        assert!(set.contains("the") && set.contains("and") && set.contains("of"));
    }

    #[test]
    fn prepare_selects_seeded_sentences() {
        let mut corpus = tempfile::NamedTempFile::new().unwrap();
        write!(
            corpus,
            "The cat sat on a mat! A dog ran far away. Birds fly \
             south every winter? Tiny words. Fish swim deep rivers daily."
        )
        .unwrap();
        corpus.flush().unwrap();
        let stop = stopfile("the\na\non");
        let spec = CorpusSpec {
            corpus_path: corpus.path().into(),
            stopword_path: stop.path().into(),
            min_len: 3,
            max_len: 5,
            count: 3,
            seed: 7,
        };
        let (sentences, vocab) = prepare_corpus(&spec).unwrap();
        assert_eq!(sentences.len(), 3);
        for s in &sentences {
            assert!((3..=5).contains(&s.len()));
        }
        // First-occurrence order means the first sentence's first token is id 0.
        assert_eq!(vocab.id_of(&sentences[0][0]), Some(SymbolId(0)));
        let again = prepare_corpus(&spec).unwrap();
        assert_eq!(again.0, sentences);
        assert_eq!(again.1, vocab);
    }

    #[test]
    fn too_small_corpus_is_an_error() {
        let mut corpus = tempfile::NamedTempFile::new().unwrap();
        write!(corpus, "one two three.").unwrap();
        corpus.flush().unwrap();
        let stop = stopfile("");
        let spec = CorpusSpec {
            corpus_path: corpus.path().into(),
            stopword_path: stop.path().into(),
            min_len: 2,
            max_len: 5,
            count: 10,
            seed: 0,
        };
        assert!(matches!(
            prepare_corpus(&spec),
            Err(SsakgError::CorpusTooSmall { survivors: 1, requested: 10 })
        ));
    }

    #[test]
    fn virtual_encoding_examples() {
        let mut vocab = Vocabulary::new();
        let toks = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();

        let seq = encode_virtual(&toks(&["a", "b", "a"]), &mut vocab);
        assert_eq!(seq.len(), 3);
        assert_eq!(vocab.token(seq[0]), Some("a"));
        assert_eq!(vocab.token(seq[1]), Some("b"));
        assert_eq!(vocab.token(seq[2]), Some("a#2"));

        let before = vocab.len();
        let plain = encode_virtual(&toks(&["c", "d"]), &mut vocab);
        assert_eq!(plain.len(), 2);
        assert_eq!(vocab.len(), before + 2);

        let tripled = encode_virtual(&toks(&["a", "a", "a"]), &mut vocab);
        assert_eq!(vocab.token(tripled[1]), Some("a#2"));
        assert_eq!(vocab.token(tripled[2]), Some("a#3"));
    }

    #[test]
    fn frequency_table_sorted_and_total_preserved() {
        let sentences = vec![
            vec!["b".to_string(), "a".to_string(), "b".to_string()],
            vec!["c".to_string(), "b".to_string(), "a".to_string()],
        ];
        let table = word_frequencies(&sentences);
        assert_eq!(table[0], ("b".to_string(), 3));
        assert_eq!(table[1], ("a".to_string(), 2));
        assert_eq!(table[2], ("c".to_string(), 1));
        let total: usize = table.iter().map(|(_, c)| c).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn prepared_corpus_roundtrip() {
        let mut vocab = Vocabulary::new();
        let sentences = vec![
            vec!["red".to_string(), "fox".to_string()],
            vec!["fox".to_string(), "den".to_string()],
        ];
        for s in &sentences {
            for t in s {
                vocab.intern(t);
            }
        }
        let prepared = PreparedCorpus::from_sentences(&sentences, &vocab).unwrap();
        assert_eq!(prepared.sentences, vec![vec![0, 1], vec![1, 2]]);
        let f = tempfile::NamedTempFile::new().unwrap();
        prepared.save(f.path()).unwrap();
        assert_eq!(PreparedCorpus::load(f.path()).unwrap(), prepared);
    }
}

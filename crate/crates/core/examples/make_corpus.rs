//! Generates a deterministic book-like corpus for text experiments:
//! Zipf-distributed nonsense vocabulary mixed with real English function
//! words and punctuation, wrapped into prose lines.
//!
//! Usage: `cargo run -p ssakg --example make_corpus -- OUT [SENTENCES] [SEED]`

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

const SYLLABLES: &[&str] = &[
    "ba", "be", "bi", "bo", "bu", "da", "de", "di", "do", "du", "fa", "fe", "fi", "fo", "ka",
    "ke", "ki", "ko", "ku", "la", "le", "li", "lo", "lu", "ma", "me", "mi", "mo", "mu", "na",
    "ne", "ni", "no", "nu", "pa", "pe", "pi", "po", "ra", "re", "ri", "ro", "ru", "sa", "se",
    "si", "so", "su", "ta", "te", "ti", "tu", "va", "ve", "vi", "vo", "za", "ze", "zi", "zo",
    "mar", "tel", "vin", "dor", "gan", "hul", "jen", "kor", "lim", "nor", "pol", "rud", "sel",
    "tor", "wen", "yal", "bren", "dap", "fint", "glim", "hark", "jast", "kell", "lorn", "mird",
    "nast", "orn", "prell", "quor", "rasp", "trov", "urn", "vect", "wold", "yurt", "zell",
];

const FUNCTION_WORDS: &[(&str, f64)] = &[
    ("the", 20.0),
    ("of", 10.0),
    ("and", 9.0),
    ("a", 7.0),
    ("to", 7.0),
    ("in", 6.0),
    ("that", 3.5),
    ("it", 3.0),
    ("was", 3.0),
    ("he", 2.5),
    ("for", 2.5),
    ("with", 2.2),
    ("as", 2.2),
    ("his", 2.0),
    ("on", 2.0),
    ("be", 1.8),
    ("at", 1.6),
    ("by", 1.5),
    ("not", 1.5),
    ("this", 1.3),
    ("had", 1.3),
    ("but", 1.2),
    ("from", 1.2),
    ("they", 1.1),
    ("she", 1.0),
    ("which", 1.0),
    ("her", 1.0),
    ("them", 0.8),
    ("were", 0.8),
    ("all", 0.8),
];

/// Content-word sentence lengths, weighted so exact 15-word sentences are
/// plentiful.
const LENGTH_WEIGHTS: &[(usize, f64)] = &[
    (10, 1.2),
    (11, 1.2),
    (12, 1.2),
    (13, 1.4),
    (14, 1.6),
    (15, 3.4),
    (16, 0.8),
    (17, 0.7),
];

fn build_lexicon(size: usize, rng: &mut ChaCha12Rng) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    let mut lexicon = Vec::with_capacity(size);
    while lexicon.len() < size {
        let syllables = rng.random_range(2..=4);
        let word: String = (0..syllables)
            .map(|_| SYLLABLES[rng.random_range(0..SYLLABLES.len())])
            .collect();
        if seen.insert(word.clone()) {
            lexicon.push(word);
        }
    }
    lexicon
}

struct WeightedTable {
    cumulative: Vec<f64>,
    total: f64,
}

impl WeightedTable {
    fn new(weights: impl Iterator<Item = f64>) -> Self {
        let mut cumulative = Vec::new();
        let mut total = 0.0;
        for w in weights {
            total += w;
            cumulative.push(total);
        }
        WeightedTable { cumulative, total }
    }

    fn zipf(n: usize, exponent: f64) -> Self {
        WeightedTable::new((1..=n).map(|k| 1.0 / (k as f64).powf(exponent)))
    }

    fn sample(&self, rng: &mut ChaCha12Rng) -> usize {
        let u: f64 = rng.random_range(0.0..self.total);
        self.cumulative.partition_point(|&c| c <= u)
    }
}

pub fn generate_corpus(sentences: usize, seed: u64) -> String {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let lexicon = build_lexicon(14_000, &mut rng);
    let content_dist = WeightedTable::zipf(lexicon.len(), 0.95);
    let function_dist = WeightedTable::new(FUNCTION_WORDS.iter().map(|&(_, w)| w));
    let length_dist = WeightedTable::new(LENGTH_WEIGHTS.iter().map(|&(_, w)| w));

    let mut text = String::new();
    let mut line_len = 0usize;
    for _ in 0..sentences {
        let target = LENGTH_WEIGHTS[length_dist.sample(&mut rng)].0;
        let mut words: Vec<String> = Vec::new();
        let mut content = 0usize;
        while content < target {
            if rng.random_range(0.0..1.0) < 0.35 {
                words.push(FUNCTION_WORDS[function_dist.sample(&mut rng)].0.to_string());
            } else {
                words.push(lexicon[content_dist.sample(&mut rng)].clone());
                content += 1;
            }
        }
        let last = words.len() - 1;
        for (i, w) in words.iter_mut().enumerate() {
            if i == 0 {
                let mut chars = w.chars();
                let head = chars.next().unwrap().to_uppercase().to_string();
                *w = head + chars.as_str();
            }
            if i < last && rng.random_range(0.0..1.0) < 0.06 {
                w.push(',');
            }
        }
        let terminal = match rng.random_range(0..100) {
            0..=85 => '.',
            86..=92 => '!',
            _ => '?',
        };
        words[last].push(terminal);

        for w in words {
            if line_len + w.len() + 1 > 78 {
                text.push('\n');
                line_len = 0;
            } else if line_len > 0 {
                text.push(' ');
                line_len += 1;
            }
            line_len += w.len();
            text.push_str(&w);
        }
    }
    text.push('\n');
    text
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.len() < 2 {
        eprintln!("usage: make_corpus OUT [SENTENCES] [SEED]");
        std::process::exit(2);
    }
    let out = &args[1];
    let sentences: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(6000);
    let seed: u64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(7);
    let text = generate_corpus(sentences, seed);
    let mut file = std::fs::File::create(out).expect("create output file");
    file.write_all(text.as_bytes()).expect("write corpus");
    println!("wrote {sentences} sentences ({} bytes) to {out}", text.len());
}

//! Normal-orders a few words in the generators of S_μU(2) and shows that
//! leftmost and rightmost rewriting reach the same polynomial.
//!
//! cargo run --example normal_ordering -- "γ*αα*"

use qdfs::algebra::rewrite::{check_confluence, Rewriter, Strategy};
use qdfs::algebra::{normal_order, Word};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let words = if args.is_empty() {
        vec![
            "γα".to_string(),
            "αα*".to_string(),
            "γ*α*αγ".to_string(),
            "α*γαγ*".to_string(),
        ]
    } else {
        args
    };
    let rw = Rewriter::default();
    for w in &words {
        let word: Word = match w.parse() {
            Ok(word) => word,
            Err(e) => {
                eprintln!("{w}: {e}");
                std::process::exit(1);
            }
        };
        let left = rw.normalize_word(&word, Strategy::Leftmost);
        let right = rw.normalize_word(&word, Strategy::Rightmost);
        println!("{word:>10}  =  {}", normal_order(&word));
        assert_eq!(left, right);
    }
    match check_confluence(4) {
        Ok(n) => println!("all {n} words of length ≤ 4 rewrite confluently"),
        Err(f) => println!("confluence fails on {} ({})", f.word, f.route),
    }
}

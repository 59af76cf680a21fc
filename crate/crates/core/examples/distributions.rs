//! Distributions over three semirings, pushforward and entropy.

use semunify::distribution::{max_entropy, rational, Distribution, Rational, Real};

fn main() -> semunify::Result<()> {
    let counts = Distribution::<&str, Rational>::from_counts([("t1", 14), ("t2", 24), ("t3", 0), ("t4", 10)])?;
    for (x, p) in counts.iter() {
        println!("{x}: {p}");
    }
    println!("argmax {:?}, entropy {:.4} bits", counts.argmax(), counts.entropy());

    // Which monkey-or-banana reading does `they were ripe` get?
    let ripe = counts.pushforward(|t| Some(if matches!(*t, "t1" | "t2") { "bananas" } else { "monkeys" }))?;
    println!("ripe: bananas {}, monkeys {}", ripe.weight(&"bananas"), ripe.weight(&"monkeys"));

    let possible = Distribution::<u8, bool>::from_subset([1, 2, 3, 4])?;
    let parity = possible.pushforward(|n| Some(n % 2))?;
    println!("boolean image of parity: {:?}", parity.to_subset());

    let uniform = Distribution::new([(0, rational(1, 2)), (1, rational(1, 2))])?;
    let skewed = Distribution::new([(0, rational(3, 4)), (1, rational(1, 4))])?;
    println!("max entropy among [skewed, uniform]: index {:?}", max_entropy(&[skewed, uniform]));

    let real = Distribution::from_weights([("a", Real(0.1)), ("b", Real(0.2)), ("c", Real(0.7))])?;
    println!("real-valued entropy: {:.4} bits", real.entropy());
    Ok(())
}

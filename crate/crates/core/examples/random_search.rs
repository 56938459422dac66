//! Seeded search over 3x3 couples, persisted as JSONL and read back.

use cubeseeker::explorer::{random_search, read_records, write_records, SearchParams};
use cubeseeker::rational::{decimal_string, pow10_neg, rat};
use cubeseeker::{builtin, ConditionMode};

fn main() -> cubeseeker::Result<()> {
    let mut p = SearchParams::new(2, 3, rat(1, 2), ConditionMode::Weak, 200, 42, pow10_neg(5));
    p.inject.push(builtin::holzman());
    p.timestamp = "2000-01-01T00:00:00Z".into();
    let records = random_search(&p)?;

    println!("{} distinct couples; lowest five:", records.len());
    for r in records.iter().take(5) {
        println!("  {}  s* <= {}  {:?}", r.id, decimal_string(&r.certified.hi, 8), r.config.labels());
    }

    let dir = std::env::temp_dir().join("cubeseeker-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("records.jsonl");
    write_records(&path, &records)?;
    let back = read_records(&path)?;
    println!("round trip through {}: {}", path.display(), back == records);
    Ok(())
}

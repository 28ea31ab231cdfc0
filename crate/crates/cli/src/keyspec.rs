use quasimap_gmt::{Context, InsertionMultiset, WKey};

/// Parses `"a,b|c1,c2,...|d"`; the middle field may be empty.
pub fn parse_key(context: Context, text: &str) -> Result<WKey, String> {
    let fields: Vec<&str> = text.split('|').collect();
    let [boundary, insertions, degree] = fields[..] else {
        return Err(format!("key {text:?}: expected \"a,b|c1,c2,...|d\""));
    };
    let boundary = numbers(boundary).map_err(|e| format!("key {text:?}: {e}"))?;
    let [a, b] = boundary[..] else {
        return Err(format!("key {text:?}: expected two boundary exponents"));
    };
    let insertions = numbers(insertions).map_err(|e| format!("key {text:?}: {e}"))?;
    let d = degree
        .trim()
        .parse()
        .map_err(|_| format!("key {text:?}: bad degree {degree:?}"))?;
    Ok(WKey::new(context, a, b, InsertionMultiset::from_exponents(insertions), d))
}

fn numbers(field: &str) -> Result<Vec<u32>, String> {
    if field.trim().is_empty() {
        return Ok(Vec::new());
    }
    field
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| format!("bad number {s:?}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses() {
        let ctx = Context::new(8, 8).unwrap();
        let k = parse_key(ctx, "2,2|2|1").unwrap();
        assert_eq!(k.to_string(), "w(2,2|2)_1");
        let k = parse_key(ctx, "0,5||1").unwrap();
        assert_eq!((k.a, k.b, k.insertions.len()), (5, 0, 0));
        assert!(parse_key(ctx, "2,2|2").is_err());
        assert!(parse_key(ctx, "2|2|1").is_err());
        assert!(parse_key(ctx, "2,2|x|1").is_err());
    }
}

use std::collections::BTreeMap;

use super::Article;

/// Keeps one article per id, the earliest published, and sorts the survivors
/// by `(published_at, id)`. The result does not depend on input order.
pub fn deduplicate(articles: Vec<Article>) -> Vec<Article> {
    let mut by_id: BTreeMap<String, Article> = BTreeMap::new();
    for a in articles {
        match by_id.get(&a.id) {
            Some(kept) if precedence(kept) <= precedence(&a) => {}
            _ => {
                by_id.insert(a.id.clone(), a);
            }
        }
    }
    let mut out: Vec<Article> = by_id.into_values().collect();
    out.sort_by(|a, b| (a.published_at, &a.id).cmp(&(b.published_at, &b.id)));
    out
}

/// Total order among same-id copies: earliest date, then the remaining
/// fields so equal-date copies resolve the same way for any permutation.
fn precedence(a: &Article) -> impl Ord + '_ {
    (a.published_at, &a.url, &a.outlet, &a.title, &a.body, a.language, &a.matched_entities)
}

use super::classes::ConjClasses;
use super::named::Named;
use super::subgroup::SubgroupTable;
use super::table::GroupTable;
use super::{enumerate_k, DEFAULT_BUDGET};
use crate::error::Result;
use crate::ring::RingCtx;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// `K/K_N` together with its conjugacy classes and named subgroups, built lazily.
#[derive(Debug)]
pub struct Level {
    table: Arc<GroupTable>,
    full: Arc<SubgroupTable>,
    classes: OnceLock<Arc<ConjClasses>>,
    named: Mutex<BTreeMap<Named, Arc<SubgroupTable>>>,
}

type Memo = Mutex<HashMap<(u64, u64, u32), Arc<Level>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

impl Level {
    pub fn enumerate(ctx: &RingCtx, budget: u64) -> Result<Self> {
        Ok(Self::from_table(Arc::new(enumerate_k(ctx, budget)?)))
    }

    pub fn from_table(table: Arc<GroupTable>) -> Self {
        let full = Arc::new(SubgroupTable::full(&table));
        Level {
            table,
            full,
            classes: OnceLock::new(),
            named: Mutex::new(BTreeMap::new()),
        }
    }

    /// Install conjugacy classes obtained elsewhere (e.g. from the cache).
    pub fn with_classes(self, classes: Arc<ConjClasses>) -> Self {
        let _ = self.classes.set(classes);
        self
    }

    /// Process-wide shared instance, enumerated under the default budget.
    pub fn shared(ctx: &RingCtx) -> Result<Arc<Level>> {
        let key = (ctx.p(), ctx.eps(), ctx.level());
        if let Some(l) = memo().lock().unwrap().get(&key) {
            return Ok(l.clone());
        }
        let level = Arc::new(Level::enumerate(ctx, DEFAULT_BUDGET)?);
        Ok(memo().lock().unwrap().entry(key).or_insert(level).clone())
    }

    pub fn ctx(&self) -> &RingCtx {
        self.table.ctx()
    }

    pub fn n(&self) -> u32 {
        self.ctx().level()
    }

    pub fn table(&self) -> &Arc<GroupTable> {
        &self.table
    }

    pub fn full(&self) -> &Arc<SubgroupTable> {
        &self.full
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn classes(&self) -> &Arc<ConjClasses> {
        self.classes.get_or_init(|| Arc::new(ConjClasses::compute(&self.full)))
    }

    pub fn subgroup(&self, name: Named) -> Result<Arc<SubgroupTable>> {
        if let Some(s) = self.named.lock().unwrap().get(&name) {
            return Ok(s.clone());
        }
        let ctx = self.ctx().clone();
        let sub = match name {
            Named::ZUJ(d) => {
                let zu = self.subgroup(Named::CenterUnipotent)?;
                let j = self.subgroup(Named::J(d))?;
                zu.product(&j, name.to_string())?
            }
            _ => SubgroupTable::from_predicate(&self.table, name.to_string(), |g| {
                name.predicate(&ctx, g).unwrap_or(false)
            })?,
        };
        let sub = Arc::new(sub);
        Ok(self.named.lock().unwrap().entry(name).or_insert(sub).clone())
    }
}

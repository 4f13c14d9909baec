#include "ktaint/engine.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace ktaint {

namespace {

// Concrete origins come from a source call. Symbolic origins stand for
// whatever taint of `query` sits in `holder` when the method is entered;
// call sites substitute them with their own facts.
struct Origin {
  std::size_t query = 0;
  bool symbolic = false;
  std::string holder;
  std::size_t rule = 0;
  Location loc;

  friend auto operator<=>(const Origin&, const Origin&) = default;
  friend bool operator==(const Origin&, const Origin&) = default;
};

using OriginSet = std::set<Origin>;
// Holders: "l:<local>", "s:<slot>", "f:<field key>".
using Facts = std::map<std::string, OriginSet>;
using EntryKey = std::set<std::pair<std::string, std::size_t>>;
using SummaryKey = std::pair<std::string, EntryKey>;
using FindingKey = std::tuple<std::size_t, Location, Location>;

struct Summary {
  Facts exits;
  // (symbolic origin, sink) -> call sites between entry and the sink
  std::map<std::pair<Origin, Location>, std::vector<Location>> pending;
  std::map<FindingKey, std::vector<Location>> findings;

  std::size_t size() const {
    std::size_t n = pending.size() + findings.size();
    for (const auto& [h, s] : exits) n += s.size();
    return n;
  }

  bool merge(const Summary& other) {
    const std::size_t before = size();
    for (const auto& [h, s] : other.exits) exits[h].insert(s.begin(), s.end());
    for (const auto& [k, v] : other.pending) pending.emplace(k, v);
    for (const auto& [k, v] : other.findings) findings.emplace(k, v);
    return size() != before;
  }
};

const OriginSet& get(const Facts& facts, const std::string& holder) {
  static const OriginSet kEmpty;
  auto it = facts.find(holder);
  return it == facts.end() ? kEmpty : it->second;
}

void assign(Facts& facts, const std::string& holder, OriginSet value) {
  if (value.empty()) {
    facts.erase(holder);
  } else {
    facts[holder] = std::move(value);
  }
}

void add(Facts& facts, const std::string& holder, const OriginSet& value) {
  if (!value.empty()) facts[holder].insert(value.begin(), value.end());
}

std::string local_holder(const std::string& local) { return "l:" + local; }
std::string slot_holder(const SlotRef& slot) {
  SlotRef plain = slot;
  plain.receiver_kind.reset();
  return "s:" + plain.to_string();
}
std::string field_holder(const FieldRef& f) { return "f:" + f.key(); }

bool is_field_holder(const std::string& h) { return h.rfind("f:", 0) == 0; }

class Analyzer {
 public:
  Analyzer(const IrProgram& program, const std::vector<NormalizedQuery>& queries,
           const Options& options)
      : program_(program), queries_(queries), options_(options) {
    rules_.resize(queries.size());
    for (std::size_t q = 0; q < queries.size(); ++q) {
      for (const auto& rule : queries[q].rules) {
        rules_[q][static_cast<int>(rule.role)].push_back(&rule);
      }
    }
  }

  std::vector<Finding> run(AnalysisStats* stats) {
    for (const auto& ref : program_.methods()) {
      table_.emplace(SummaryKey{ref.method->signature.to_string(), {}}, Summary{});
    }
    std::size_t iterations = 0;
    std::size_t measure = 0;
    for (;;) {
      ++iterations;
      std::vector<SummaryKey> keys;
      keys.reserve(table_.size());
      for (const auto& [k, v] : table_) keys.push_back(k);
      bool changed = false;
      for (const auto& key : keys) {
        Summary s = compute(key);
        if (table_[key].merge(s)) changed = true;
      }
      if (table_.size() != keys.size()) changed = true;
      std::size_t now = table_.size();
      for (const auto& [k, v] : table_) now += v.size();
      // Every round that changes something grows the table, which is
      // bounded by methods x entry contexts x facts.
      if (changed && now <= measure) {
        throw std::logic_error("taint fixpoint failed to make progress");
      }
      measure = now;
      if (!changed) break;
    }

    std::map<FindingKey, std::vector<Location>> all;
    for (const auto& [k, s] : table_) {
      for (const auto& [fk, w] : s.findings) all.emplace(fk, w);
    }
    std::vector<Finding> out;
    out.reserve(all.size());
    for (const auto& [fk, w] : all) {
      const auto& [q, src, sink] = fk;
      out.push_back({queries_[q].id, queries_[q].message, src, sink, w});
    }
    std::sort(out.begin(), out.end(), [](const Finding& a, const Finding& b) {
      return std::tie(a.query_id, a.source.file, a.source.line, a.sink.line,
                      a.sink.file, a.source.class_name, a.sink.class_name) <
             std::tie(b.query_id, b.source.file, b.source.line, b.sink.line,
                      b.sink.file, b.source.class_name, b.sink.class_name);
    });
    if (stats) {
      stats->summaries = table_.size();
      stats->iterations = iterations;
      stats->statements_visited = visited_;
    }
    return out;
  }

 private:
  const Summary& lookup(const SummaryKey& key) {
    return table_.try_emplace(key).first->second;
  }

  Summary compute(const SummaryKey& key) {
    Summary out;
    const auto ref = program_.find(key.first);
    if (!ref) return out;
    const IrClass& cls = *ref->cls;
    const std::string uri = cls.report_uri();

    Facts facts;
    for (const auto& [holder, q] : key.second) {
      facts[holder].insert(Origin{q, true, holder, 0, {}});
    }
    std::map<std::string, std::string> bound;  // local -> slot holder

    for (const auto& st : ref->method->statements) {
      ++visited_;
      const Location loc{cls.name, uri, st.line};
      bool stop = false;
      std::visit(
          [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, stmt::Identity>) {
              const std::string h = slot_holder(op.slot);
              assign(facts, local_holder(op.local), get(facts, h));
              bound[op.local] = h;
            } else if constexpr (std::is_same_v<T, stmt::Const>) {
              facts.erase(local_holder(op.local));
              bound.erase(op.local);
            } else if constexpr (std::is_same_v<T, stmt::Copy>) {
              assign(facts, local_holder(op.dst), get(facts, local_holder(op.src)));
              bound.erase(op.dst);
            } else if constexpr (std::is_same_v<T, stmt::FieldStore>) {
              add(facts, field_holder(op.field), get(facts, local_holder(op.src)));
            } else if constexpr (std::is_same_v<T, stmt::FieldLoad>) {
              assign(facts, local_holder(op.dst), get(facts, field_holder(op.field)));
              bound.erase(op.dst);
            } else if constexpr (std::is_same_v<T, stmt::Invoke>) {
              invoke(op, loc, facts, out);
              if (op.result) bound.erase(*op.result);
            } else if constexpr (std::is_same_v<T, stmt::Return>) {
              if (op.local) out.exits["s:return"] = get(facts, local_holder(*op.local));
              stop = true;
            }
          },
          st.op);
      if (stop) break;
    }

    for (const auto& [local, slot] : bound) add(out.exits, slot, get(facts, local_holder(local)));
    for (const auto& [h, s] : facts) {
      if (is_field_holder(h)) add(out.exits, h, s);
    }
    for (auto it = out.exits.begin(); it != out.exits.end();) {
      it = it->second.empty() ? out.exits.erase(it) : std::next(it);
    }
    return out;
  }

  void invoke(const stmt::Invoke& op, const Location& loc, Facts& facts,
              Summary& out) {
    const Facts pre = facts;
    auto local_for = [&](const SlotRef& slot) -> std::optional<std::string> {
      switch (slot.kind) {
        case SlotRef::Kind::kThis:
          return op.receiver;
        case SlotRef::Kind::kParam:
          if (slot.index < op.args.size()) return op.args[slot.index];
          return std::nullopt;
        case SlotRef::Kind::kReturn:
          return std::nullopt;
      }
      return std::nullopt;
    };
    auto record = [&](std::size_t q, const Location& src, std::vector<Location> w) {
      out.findings.emplace(FindingKey{q, src, w.back()}, std::move(w));
    };

    OriginSet result_gen;
    std::vector<std::pair<std::string, OriginSet>> adds;  // holder, facts
    std::vector<std::pair<std::string, std::size_t>> kills;
    bool any_match = false;

    auto produce = [&](const SlotRef& slot, const OriginSet& value) {
      if (slot.kind == SlotRef::Kind::kReturn) {
        result_gen.insert(value.begin(), value.end());
      } else if (auto l = local_for(slot)) {
        adds.emplace_back(local_holder(*l), value);
      }
    };

    for (std::size_t q = 0; q < rules_.size(); ++q) {
      const auto& by_role = rules_[q];
      bool sanitized = false;
      for (const auto* rule : by_role[static_cast<int>(Role::kSanitizer)]) {
        auto v = match_call(op.callee, *rule);
        if (!v) continue;
        sanitized = true;
        for (const auto& slot : rule->variants[*v].in_slots) {
          if (auto l = local_for(slot)) kills.emplace_back(local_holder(*l), q);
        }
      }
      if (sanitized) {
        any_match = true;
        continue;
      }

      bool propagated = false;
      for (const auto* rule : by_role[static_cast<int>(Role::kPropagator)]) {
        auto v = match_call(op.callee, *rule);
        if (!v) continue;
        propagated = true;
        const auto& nv = rule->variants[*v];
        OriginSet in;
        for (const auto& slot : nv.in_slots) {
          if (auto l = local_for(slot)) {
            for (const auto& o : get(pre, local_holder(*l))) {
              if (o.query == q) in.insert(o);
            }
          }
        }
        if (in.empty()) continue;
        for (const auto& slot : nv.out_slots) produce(slot, in);
      }
      if (propagated) {
        any_match = true;
        continue;
      }

      for (const auto* rule : by_role[static_cast<int>(Role::kSource)]) {
        auto v = match_call(op.callee, *rule);
        if (!v) continue;
        any_match = true;
        const OriginSet gen{Origin{q, false, "", rule->index, loc}};
        for (const auto& slot : rule->variants[*v].out_slots) produce(slot, gen);
      }
      for (const auto* rule : by_role[static_cast<int>(Role::kSink)]) {
        auto v = match_call(op.callee, *rule);
        if (!v) continue;
        any_match = true;
        for (const auto& slot : rule->variants[*v].in_slots) {
          auto l = local_for(slot);
          if (!l) continue;
          for (const auto& o : get(pre, local_holder(*l))) {
            if (o.query != q) continue;
            if (o.symbolic) {
              out.pending.emplace(std::pair{o, loc}, std::vector<Location>{});
            } else {
              record(q, o.loc, {o.loc, loc});
            }
          }
        }
      }
    }

    const auto callee_ref = program_.find(op.callee.to_string());
    if (callee_ref) {
      // Callee holder -> caller holder at this call site.
      auto caller_holder = [&](const std::string& h) -> std::optional<std::string> {
        if (is_field_holder(h)) return h;
        if (h == "s:this") {
          if (op.receiver) return local_holder(*op.receiver);
          return std::nullopt;
        }
        for (std::size_t i = 0; i < op.args.size(); ++i) {
          if (h == slot_holder(SlotRef::param(i))) return local_holder(op.args[i]);
        }
        return std::nullopt;
      };
      EntryKey entry;
      auto enter = [&](const std::string& callee_h, const std::string& caller_h) {
        for (const auto& o : get(pre, caller_h)) entry.emplace(callee_h, o.query);
      };
      if (op.receiver) enter("s:this", local_holder(*op.receiver));
      for (std::size_t i = 0; i < op.args.size(); ++i) {
        enter(slot_holder(SlotRef::param(i)), local_holder(op.args[i]));
      }
      for (const auto& [h, s] : pre) {
        if (is_field_holder(h)) enter(h, h);
      }
      const Summary& callee = lookup({op.callee.to_string(), std::move(entry)});

      auto subst = [&](const Origin& o) {
        if (!o.symbolic) return OriginSet{o};
        OriginSet r;
        if (auto h = caller_holder(o.holder)) {
          for (const auto& c : get(pre, *h)) {
            if (c.query == o.query) r.insert(c);
          }
        }
        return r;
      };
      auto subst_all = [&](const OriginSet& s) {
        OriginSet r;
        for (const auto& o : s) r.merge(subst(o));
        return r;
      };

      for (const auto& [h, s] : callee.exits) {
        OriginSet v = subst_all(s);
        if (h == "s:return") {
          result_gen.insert(v.begin(), v.end());
        } else if (auto ch = caller_holder(h)) {
          adds.emplace_back(*ch, std::move(v));
        }
      }
      for (const auto& [k, chain] : callee.pending) {
        const auto& [o, sink] = k;
        for (const auto& c : subst(o)) {
          std::vector<Location> path{loc};
          path.insert(path.end(), chain.begin(), chain.end());
          if (c.symbolic) {
            out.pending.emplace(std::pair{c, sink}, std::move(path));
          } else {
            std::vector<Location> w{c.loc};
            w.insert(w.end(), path.begin(), path.end());
            w.push_back(sink);
            record(c.query, c.loc, std::move(w));
          }
        }
      }
    } else if (options_.implicit_propagation && !any_match) {
      if (op.receiver) add_to(result_gen, get(pre, local_holder(*op.receiver)));
      for (const auto& a : op.args) add_to(result_gen, get(pre, local_holder(a)));
    }

    for (const auto& [h, q] : kills) {
      auto it = facts.find(h);
      if (it == facts.end()) continue;
      std::erase_if(it->second, [q = q](const Origin& o) { return o.query == q; });
      if (it->second.empty()) facts.erase(it);
    }
    for (const auto& [h, s] : adds) add(facts, h, s);
    if (op.result) assign(facts, local_holder(*op.result), std::move(result_gen));
  }

  static void add_to(OriginSet& dst, const OriginSet& src) {
    dst.insert(src.begin(), src.end());
  }

  const IrProgram& program_;
  const std::vector<NormalizedQuery>& queries_;
  Options options_;
  std::vector<std::array<std::vector<const NormalizedRule*>, 4>> rules_;
  std::map<SummaryKey, Summary> table_;
  std::size_t visited_ = 0;
};

}  // namespace

std::string Location::to_string() const {
  return file + ":" + std::to_string(line);
}

std::optional<std::size_t> match_call(const MethodSignature& callee,
                                      const NormalizedRule& rule) {
  for (std::size_t i = 0; i < rule.variants.size(); ++i) {
    if (signature_matches(rule.variants[i].variant.signature, callee)) return i;
  }
  return std::nullopt;
}

std::vector<Finding> analyze(const IrProgram& program,
                             const std::vector<NormalizedQuery>& queries,
                             const Options& options, AnalysisStats* stats) {
  return Analyzer(program, queries, options).run(stats);
}

}  // namespace ktaint

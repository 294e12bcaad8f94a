#include "tandem/broker_sim.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <functional>

namespace tandem::broker {

std::string_view to_string(Fault f) {
  switch (f) {
    case Fault::None:
      return "none";
    case Fault::CommitWrongLender:
      return "commit-wrong-lender";
    case Fault::SkipReject:
      return "skip-reject";
    case Fault::IgnoreDeadline:
      return "ignore-deadline";
  }
  return "?";
}

std::optional<Fault> parse_fault(std::string_view s) {
  for (auto f : {Fault::None, Fault::CommitWrongLender, Fault::SkipReject, Fault::IgnoreDeadline}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

std::string_view fault_event_kind(Fault f) {
  switch (f) {
    case Fault::None:
      return "";
    case Fault::CommitWrongLender:
      return "CommitLender";
    case Fault::SkipReject:
      return "RejectParty";
    case Fault::IgnoreDeadline:
      // The missing Expire shows up as the clock moving past a due deadline.
      return "Tick";
  }
  return "";
}

void validate(const SimConfig& c) {
  if (c.lenders < 1 || c.lenders > 9) throw ConfigError("lenders must be between 1 and 9");
  if (c.insurers < 1 || c.insurers > 9) throw ConfigError("insurers must be between 1 and 9");
  if (c.offer_ttl < 1) throw ConfigError("offer_ttl must be at least 1");
  if (c.max_ticks < 1) throw ConfigError("max_ticks must be at least 1");
  if (c.drop_probability.den == 0 || c.drop_probability.num > c.drop_probability.den) {
    throw ConfigError("drop_probability must lie in [0, 1]");
  }
}

SimConfig config_from_json(const Json& j, SimConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  auto integer = [](const Json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError(key + " must be an integer");
    return v.get<std::int64_t>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "lenders") {
      c.lenders = static_cast<int>(integer(v, key));
    } else if (key == "insurers") {
      c.insurers = static_cast<int>(integer(v, key));
    } else if (key == "offer_ttl") {
      c.offer_ttl = static_cast<int>(integer(v, key));
    } else if (key == "max_ticks") {
      c.max_ticks = static_cast<int>(integer(v, key));
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "commit_priority") {
      if (!v.is_boolean()) throw ConfigError("commit_priority must be a boolean");
      c.commit_priority = v.get<bool>();
    } else if (key == "drop_probability") {
      try {
        c.drop_probability = Probability::parse(v.is_string() ? v.get<std::string>() : v.dump());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("drop_probability: ") + e.what());
      }
    } else if (key == "fault") {
      const auto f = v.is_string() ? parse_fault(v.get<std::string>()) : std::nullopt;
      if (!f) throw ConfigError("fault must be one of none, commit-wrong-lender, skip-reject, ignore-deadline");
      c.fault = *f;
    } else {
      throw ConfigError("unknown config key " + key);
    }
  }
  validate(c);
  return c;
}

Json config_to_json(const SimConfig& c) {
  Json j;
  j["lenders"] = c.lenders;
  j["insurers"] = c.insurers;
  j["drop_probability"] = c.drop_probability.to_string();
  j["commit_priority"] = c.commit_priority;
  j["offer_ttl"] = c.offer_ttl;
  j["seed"] = c.seed;
  j["max_ticks"] = c.max_ticks;
  j["fault"] = to_string(c.fault);
  return j;
}

namespace {

// Names follow the broker models so that traces line up with them.
enum class Kind { RFQ, Offer, Commit, Reject };
enum class Status { Idle, Offered, Committed, Rejected, Expired };
enum class UserPhase { Browsing, Requested, Accepted, Done };
enum class BrokerPhase { Waiting, Quoting, Committing, Closed };

constexpr std::array kKindNames{"RFQ", "Offer", "Commit", "Reject"};
constexpr std::array kStatusNames{"Idle", "Offered", "Committed", "Rejected", "Expired"};
constexpr std::array kUserNames{"Browsing", "Requested", "Accepted", "Done"};
constexpr std::array kPhaseNames{"Waiting", "Quoting", "Committing", "Closed"};

bool priority(Kind k) { return k == Kind::Commit || k == Kind::Reject; }

struct Message {
  Kind kind;
  int party;
  int due;  // earliest tick at which the network hands it over
};

struct Party {
  std::string name;
  bool lender = false;
  Status status = Status::Idle;
  int ttl = 0;
  bool asked = false;
  std::optional<int> offer_at = std::nullopt;  // tick at which it answers the RFQ; none: declines
};

class Simulation {
 public:
  explicit Simulation(const SimConfig& c) : c_(c), rng_(c.seed) {
    for (int i = 0; i < c.lenders; ++i) parties_.push_back({"L" + std::to_string(i + 1), true});
    for (int i = 0; i < c.insurers; ++i) parties_.push_back({"I" + std::to_string(i + 1), false});
    const auto n = parties_.size();
    offers_.assign(n, false);
    seen_.assign(n, false);
    chosen_.assign(n, false);
    commit_requested_.assign(n, false);
    reject_sent_.assign(n, false);
    result_.trace.header = TraceHeader{"Broker", "broker-sim", c.seed, false};
  }

  SimResult run() {
    for (tick_ = 0; tick_ < c_.max_ticks; ++tick_) {
      expire_offers();
      plan_tick();
      while (step()) {
      }
      if (quiescent()) {
        result_.quiescent = true;
        break;
      }
      advance_clock();
    }
    result_.snapshot = snapshot();
    return std::move(result_);
  }

 private:
  // --- logging -------------------------------------------------------------

  std::string msg_name(const Message& m) const { return std::string(kKindNames[static_cast<int>(m.kind)]) + "_" + parties_[m.party].name; }

  Json observe() const {
    std::vector<const Message*> sorted;
    for (const auto& m : network_) sorted.push_back(&m);
    std::sort(sorted.begin(), sorted.end(), [](const Message* a, const Message* b) {
      return std::pair(a->kind, a->party) < std::pair(b->kind, b->party);
    });
    Json net = Json::array();
    for (const auto* m : sorted) net.push_back(msg_name(*m));
    Json status = Json::object();
    for (const auto& p : parties_) status[p.name] = kStatusNames[static_cast<int>(p.status)];
    Json o;
    o["user"] = kUserNames[static_cast<int>(user_)];
    o["phase"] = kPhaseNames[static_cast<int>(phase_)];
    o["network"] = std::move(net);
    o["status"] = std::move(status);
    return o;
  }

  void log(const std::string& op, Json params = Json::object()) {
    TraceEvent e;
    e.seq = seq_++;
    e.op = op;
    e.params = std::move(params);
    e.observed = observe();
    e.ts = "t" + std::to_string(tick_);
    result_.trace.events.push_back(std::move(e));
  }

  // --- network -------------------------------------------------------------

  void send(Kind k, int party) {
    // Settling messages go out within the tick; the rest may lag one tick.
    const int delay = priority(k) ? 0 : static_cast<int>(rng_.below(2));
    network_.push_back({k, party, tick_ + delay});
  }

  bool priority_in_flight() const {
    return std::any_of(network_.begin(), network_.end(), [](const Message& m) { return priority(m.kind); });
  }

  void transmit(std::size_t i) {
    const Message m = network_[i];
    network_.erase(network_.begin() + static_cast<std::ptrdiff_t>(i));
    const bool lossless = c_.commit_priority && priority(m.kind);
    if (!lossless && rng_.chance(c_.drop_probability)) {
      log("Drop", {{"msg", msg_name(m)}});
      return;
    }
    auto& p = parties_[m.party];
    switch (m.kind) {
      case Kind::RFQ:
        p.asked = true;
        // Most parties answer within a couple of ticks; some never do.
        if (rng_.below(8) != 0) p.offer_at = tick_ + (rng_.below(4) == 0 ? 1 : 0);
        break;
      case Kind::Offer:
        if (phase_ == BrokerPhase::Quoting) offers_[m.party] = true;
        break;
      case Kind::Commit:
        if (p.status == Status::Offered) p.status = Status::Committed;
        break;
      case Kind::Reject:
        if (p.status == Status::Offered) p.status = Status::Rejected;
        break;
    }
    log("Deliver", {{"msg", msg_name(m)}});
  }

  // --- clock ---------------------------------------------------------------

  // An offer whose deadline has passed lapses without any message.
  void expire_offers() {
    if (c_.fault == Fault::IgnoreDeadline) return;
    for (std::size_t i = 0; i < parties_.size(); ++i) {
      auto& p = parties_[i];
      if (p.status == Status::Offered && p.ttl == 0) {
        p.status = Status::Expired;
        log("Expire", {{"party", p.name}});
      }
    }
  }

  void advance_clock() {
    for (auto& p : parties_) {
      if (p.status == Status::Offered && p.ttl > 0) --p.ttl;
    }
    if (phase_ == BrokerPhase::Committing) phase_ = BrokerPhase::Closed;
    if (user_ == UserPhase::Accepted) user_ = UserPhase::Done;
    log("Tick");
  }

  bool quiescent() const {
    return user_ == UserPhase::Done && network_.empty() &&
           std::none_of(parties_.begin(), parties_.end(), [](const Party& p) { return p.status == Status::Offered; });
  }

  // --- actors --------------------------------------------------------------

  void plan_tick() {
    queries_left_ = user_ == UserPhase::Requested ? 2 : 0;
    deciding_ = false;
  }

  // Collects what every actor could do right now and performs one of those
  // actions, picked at random. Returns false when nobody has anything to do.
  bool step() {
    std::vector<std::function<void()>> actions;

    // User.
    if (user_ == UserPhase::Browsing) {
      actions.emplace_back([this] { request_quote(); });
    } else if (user_ == UserPhase::Requested && phase_ == BrokerPhase::Quoting) {
      if (queries_left_ > 0 && !deciding_) actions.emplace_back([this] { query_offers(); });
      if (deciding_) actions.emplace_back([this] { decide(); });
    }

    // Broker.
    if (user_ == UserPhase::Requested && phase_ == BrokerPhase::Waiting) {
      actions.emplace_back([this] { send_rfq(); });
    }
    if (phase_ == BrokerPhase::Committing) {
      for (std::size_t i = 0; i < parties_.size(); ++i) {
        if (chosen_[i] && !commit_requested_[i]) actions.emplace_back([this, i] { commit(static_cast<int>(i)); });
        if (offers_[i] && !chosen_[i] && !reject_sent_[i]) actions.emplace_back([this, i] { reject(static_cast<int>(i)); });
      }
    }

    // Lenders and insurers.
    for (std::size_t i = 0; i < parties_.size(); ++i) {
      const auto& p = parties_[i];
      if (p.asked && p.status == Status::Idle && p.offer_at && *p.offer_at <= tick_) {
        actions.emplace_back([this, i] { make_offer(static_cast<int>(i)); });
      }
    }

    // Network. With commit priority, settling messages go before anything else.
    const bool hold_back = c_.commit_priority && priority_in_flight();
    for (std::size_t i = 0; i < network_.size(); ++i) {
      if (network_[i].due > tick_) continue;
      if (hold_back && !priority(network_[i].kind)) continue;
      actions.emplace_back([this, i] { transmit(i); });
    }

    if (actions.empty()) return false;
    actions[rng_.below(actions.size())]();
    return true;
  }

  void request_quote() {
    user_ = UserPhase::Requested;
    requested_at_ = tick_;
    patience_ = 3 + static_cast<int>(rng_.below(6));
    log("RequestQuote");
  }

  void send_rfq() {
    phase_ = BrokerPhase::Quoting;
    for (std::size_t i = 0; i < parties_.size(); ++i) send(Kind::RFQ, static_cast<int>(i));
    log("SendRFQ");
  }

  void make_offer(int i) {
    auto& p = parties_[i];
    p.status = Status::Offered;
    p.ttl = c_.offer_ttl;
    send(Kind::Offer, i);
    log("MakeOffer", {{"party", p.name}});
  }

  void query_offers() {
    seen_ = offers_;
    --queries_left_;
    deciding_ = true;
    log("QueryOffers");
  }

  // After looking at the offers the user takes a live pair, or gives up once
  // out of patience, or waits.
  void decide() {
    deciding_ = false;
    std::vector<int> lenders;
    std::vector<int> insurers;
    for (std::size_t i = 0; i < parties_.size(); ++i) {
      if (!seen_[i] || parties_[i].ttl == 0) continue;
      (parties_[i].lender ? lenders : insurers).push_back(static_cast<int>(i));
    }
    if (!lenders.empty() && !insurers.empty() && rng_.below(8) != 0) {
      const int l = lenders[rng_.below(lenders.size())];
      const int s = insurers[rng_.below(insurers.size())];
      user_ = UserPhase::Accepted;
      phase_ = BrokerPhase::Committing;
      chosen_[l] = true;
      chosen_[s] = true;
      log("AcceptOffer", {{"lender", parties_[l].name}, {"insurer", parties_[s].name}});
    } else if (tick_ - requested_at_ >= patience_) {
      user_ = UserPhase::Done;
      phase_ = BrokerPhase::Closed;
      log("Abandon");
    }
  }

  void commit(int i) {
    int target = i;
    if (c_.fault == Fault::CommitWrongLender && parties_[i].lender) {
      // Bug: commits the next lender along instead of the chosen one.
      do {
        target = (target + 1) % static_cast<int>(parties_.size());
      } while (!parties_[target].lender);
    }
    commit_requested_[i] = true;
    send(Kind::Commit, target);
    if (parties_[i].lender) {
      log("CommitLender", {{"lender", parties_[target].name}});
    } else {
      log("CommitInsurer", {{"insurer", parties_[target].name}});
    }
  }

  void reject(int i) {
    reject_sent_[i] = true;
    // Bug: the broker records the rejection but never sends it.
    if (c_.fault != Fault::SkipReject) send(Kind::Reject, i);
    log("RejectParty", {{"party", parties_[i].name}});
  }

  // --- snapshot ------------------------------------------------------------

  Json snapshot() const {
    auto names = [&](const std::vector<bool>& set) {
      Json out = Json::array();
      for (std::size_t i = 0; i < set.size(); ++i) {
        if (set[i]) out.push_back(parties_[i].name);
      }
      return out;
    };
    Json s = observe();
    s.erase("status");
    Json parties = Json::object();
    for (const auto& p : parties_) {
      parties[p.name] = {{"status", kStatusNames[static_cast<int>(p.status)]}, {"ttl", p.ttl}, {"asked", p.asked}};
    }
    Json out;
    out["tick"] = tick_;
    out["quiescent"] = result_.quiescent;
    out["events"] = seq_;
    out["user"] = s["user"];
    out["phase"] = s["phase"];
    out["network"] = s["network"];
    out["parties"] = std::move(parties);
    out["offers"] = names(offers_);
    out["chosen"] = names(chosen_);
    out["commit_requested"] = names(commit_requested_);
    out["reject_sent"] = names(reject_sent_);
    return out;
  }

  const SimConfig& c_;
  Rng rng_;
  SimResult result_;
  std::uint64_t seq_ = 0;
  int tick_ = 0;

  UserPhase user_ = UserPhase::Browsing;
  BrokerPhase phase_ = BrokerPhase::Waiting;
  std::vector<Party> parties_;
  std::vector<Message> network_;
  std::vector<bool> offers_, seen_, chosen_, commit_requested_, reject_sent_;

  int requested_at_ = 0;
  int patience_ = 0;
  int queries_left_ = 0;  // polls the user still makes this tick
  bool deciding_ = false;
};

}  // namespace

SimResult run_sim(const SimConfig& config) {
  validate(config);
  return Simulation(config).run();
}

std::vector<std::filesystem::path> testbot(const SimConfig& config, int runs, const std::filesystem::path& dir) {
  validate(config);
  if (runs < 0) throw ConfigError("runs must be non-negative");
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (int i = 0; i < runs; ++i) {
    SimConfig c = config;
    c.seed = config.seed + static_cast<std::uint64_t>(i);
    const auto result = run_sim(c);
    char name[32];
    std::snprintf(name, sizeof name, "run-%04d.trace", i);
    const auto path = dir / name;
    std::ofstream os(path, std::ios::binary);
    os << write_trace(result.trace);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace tandem::broker

#include "burstsim/workload.hpp"

#include <algorithm>
#include <cmath>

#include "burstsim/errors.hpp"

namespace burstsim {

void WorkloadSpec::validate() const {
    if (mix.empty()) throw ConfigError("workload mix is empty");
    double sum = 0.0;
    for (const auto& [kind, share] : mix) {
        (void)kind;
        if (share <= 0.0) throw ConfigError("mix proportions must be positive");
        sum += share;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("mix proportions must sum to 1");
    if (load_count < 1 || run_count < 1)
        throw ConfigError("load_count and run_count must be positive");
    if (scan_max < 1) throw ConfigError("scan_max must be >= 1");
}

WorkloadSpec make_workload(char label) {
    WorkloadSpec w;
    w.label = label;
    switch (label) {
        case 'A':
            w.display_name = "read-intensive";
            w.mix = {{OpKind::Read, 0.5}, {OpKind::Update, 0.5}};
            break;
        case 'B':
            w.display_name = "write-intensive";
            w.mix = {{OpKind::Read, 0.95}, {OpKind::Update, 0.05}};
            break;
        case 'C':
            w.display_name = "read-only";
            w.mix = {{OpKind::Read, 1.0}};
            break;
        case 'D':
            w.display_name = "read-latest";
            w.mix = {{OpKind::Read, 0.95}, {OpKind::Insert, 0.05}};
            w.key_distribution = KeyDistribution::Latest;
            break;
        case 'E':
            w.display_name = "scan";
            w.mix = {{OpKind::Scan, 0.95}, {OpKind::Insert, 0.05}};
            break;
        case 'F':
            w.display_name = "read-modify-write";
            w.mix = {{OpKind::ReadModifyWrite, 0.5}, {OpKind::Read, 0.5}};
            break;
        default:
            throw ConfigError(std::string("unknown workload label: ") + label);
    }
    return w;
}

std::vector<WorkloadSpec> all_workloads() {
    std::vector<WorkloadSpec> out;
    for (char label : {'A', 'B', 'C', 'D', 'E', 'F'})
        out.push_back(make_workload(label));
    return out;
}

ZipfianGenerator::ZipfianGenerator(long items, double theta)
    : items_(std::max(items, 1L)), theta_(theta) {
    zeta2_ = 1.0 + std::pow(0.5, theta_);
    zetan_ = 0.0;
    for (long i = 1; i <= items_; ++i)
        zetan_ += 1.0 / std::pow(static_cast<double>(i), theta_);
    refresh();
}

void ZipfianGenerator::grow(long items) {
    if (items <= items_) return;
    for (long i = items_ + 1; i <= items; ++i)
        zetan_ += 1.0 / std::pow(static_cast<double>(i), theta_);
    items_ = items;
    refresh();
}

void ZipfianGenerator::refresh() {
    alpha_ = 1.0 / (1.0 - theta_);
    eta_ = (1.0 - std::pow(2.0 / static_cast<double>(items_), 1.0 - theta_)) /
           (1.0 - zeta2_ / zetan_);
}

long ZipfianGenerator::next(RngStream& rng) {
    double u = rng.next_double();
    double uz = u * zetan_;
    if (uz < 1.0) return 0;
    if (uz < 1.0 + std::pow(0.5, theta_)) return 1;
    long v = static_cast<long>(static_cast<double>(items_) *
                               std::pow(eta_ * u - eta_ + 1.0, alpha_));
    return std::min(v, items_ - 1);
}

KeyChooser::KeyChooser(KeyDistribution dist, long initial_keys)
    : dist_(dist), keys_(initial_keys), zipf_(std::max(initial_keys, 1L)) {}

std::uint64_t KeyChooser::next_existing(RngStream& rng) {
    if (keys_ < 1) throw ConfigError("key chosen before any record was loaded");
    switch (dist_) {
        case KeyDistribution::Uniform:
            return rng.next_below(static_cast<std::uint64_t>(keys_));
        case KeyDistribution::Zipfian:
            zipf_.grow(keys_);
            return static_cast<std::uint64_t>(zipf_.next(rng));
        case KeyDistribution::Latest: {
            zipf_.grow(keys_);
            long rank = zipf_.next(rng);
            return static_cast<std::uint64_t>(keys_ - 1 - rank);
        }
    }
    throw ConfigError("unreachable key distribution");
}

std::uint64_t KeyChooser::mint() {
    return static_cast<std::uint64_t>(keys_++);
}

namespace {

OpKind draw_kind(const std::vector<std::pair<OpKind, double>>& mix,
                 RngStream& rng) {
    double u = rng.next_double();
    double cum = 0.0;
    for (const auto& [kind, share] : mix) {
        cum += share;
        if (u < cum) return kind;
    }
    return mix.back().first;
}

std::size_t idlest(const std::vector<double>& clocks) {
    return static_cast<std::size_t>(
        std::min_element(clocks.begin(), clocks.end()) - clocks.begin());
}

}  // namespace

PhaseResult run_phases(const WorkloadSpec& spec, const OpExecutor& execute,
                       int client_threads, double timeout_ms,
                       RngStream& wl_rng) {
    spec.validate();
    if (client_threads < 1) throw ConfigError("client_threads must be >= 1");
    if (timeout_ms <= 0.0) throw ConfigError("timeout_ms must be positive");

    PhaseResult result;
    result.load.reserve(static_cast<std::size_t>(spec.load_count));
    result.run.reserve(static_cast<std::size_t>(spec.run_count));

    // flush: reset keyspace
    KeyChooser chooser(spec.key_distribution, 0);
    std::vector<double> clocks(static_cast<std::size_t>(client_threads), 0.0);

    auto occupy = [&](const OpOutcome& o) {
        double held = o.status == OpStatus::TimedOut ? timeout_ms : o.latency_ms;
        clocks[idlest(clocks)] += held;
    };

    for (int i = 0; i < spec.load_count; ++i) {
        OpOutcome o = execute(OpKind::Insert, chooser.mint());
        occupy(o);
        result.load.push_back(o);
    }
    result.load_wall_ms = *std::max_element(clocks.begin(), clocks.end());

    std::fill(clocks.begin(), clocks.end(), 0.0);
    for (int i = 0; i < spec.run_count; ++i) {
        OpKind kind = draw_kind(spec.mix, wl_rng);
        std::uint64_t key = kind == OpKind::Insert ? chooser.mint()
                                                   : chooser.next_existing(wl_rng);
        OpOutcome o = execute(kind, key);
        occupy(o);
        result.run.push_back(o);
    }
    result.run_wall_ms = *std::max_element(clocks.begin(), clocks.end());
    return result;
}

}  // namespace burstsim

#include "icos/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "icos/cubic_spline.hpp"

namespace icos {

void OptionChain::validate() const {
    if (n() < 5) throw std::invalid_argument("OptionChain: need at least 5 strikes");
    if (strikes.size() != otm_prices.size())
        throw std::invalid_argument("OptionChain: strikes/prices length mismatch");
    if (maturity <= 0.0) throw std::invalid_argument("OptionChain: maturity must be positive");
    if (strikes.front() <= 0.0) throw std::invalid_argument("OptionChain: strikes must be positive");
    for (int i = 0; i + 1 < n(); ++i)
        if (strikes[i + 1] <= strikes[i])
            throw std::invalid_argument("OptionChain: strikes must be strictly ascending");
    if (forward < alpha() || forward > beta())
        throw std::invalid_argument("OptionChain: forward outside [alpha, beta]");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool is_blank(const std::string& s) {
    return s.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

OptionChain load_chain(const std::string& path, const IngestConfig& config) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_chain: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_chain: empty file " + path);
    {
        auto hdr = split_csv_line(line);
        const char* want[] = {"expiry_days", "rate", "forward", "strike", "right", "bid", "ask"};
        if (hdr.size() != 7)
            throw std::runtime_error("load_chain: expected 7-column header");
        for (int i = 0; i < 7; ++i) {
            std::string h = hdr[i];
            h.erase(h.find_last_not_of(" \t\r") + 1);
            if (h != want[i]) throw std::runtime_error("load_chain: bad header column: " + h);
        }
    }

    double expiry_days = 0.0, rate = 0.0;
    bool have_meta = false;
    std::optional<double> forward_col;
    std::vector<OptionQuote> calls, puts;

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank(line)) continue;
        auto f = split_csv_line(line);
        if (f.size() != 7)
            throw std::runtime_error("load_chain: malformed row at line " + std::to_string(lineno));
        double ed = std::stod(f[0]), r = std::stod(f[1]);
        if (!have_meta) {
            expiry_days = ed;
            rate = r;
            have_meta = true;
        } else if (ed != expiry_days || r != rate) {
            throw std::runtime_error("load_chain: mixed expiries or rates (single-expiry file expected)");
        }
        if (!is_blank(f[2])) {
            double fw = std::stod(f[2]);
            if (forward_col && *forward_col != fw)
                throw std::runtime_error("load_chain: inconsistent forward column");
            forward_col = fw;
        }
        OptionQuote q;
        q.strike = std::stod(f[3]);
        std::string right = f[4];
        right.erase(right.find_last_not_of(" \t\r") + 1);
        if (right == "C") q.right = Right::call;
        else if (right == "P") q.right = Right::put;
        else throw std::runtime_error("load_chain: right must be C or P, got " + right);
        q.bid = std::stod(f[5]);
        q.ask = std::stod(f[6]);
        if (q.strike <= 0.0 || q.bid < 0.0 || q.ask < q.bid)
            throw std::runtime_error("load_chain: invalid quote at line " + std::to_string(lineno));
        if (q.bid == 0.0) continue;  // zero-bid filter, the only one applied
        (q.right == Right::call ? calls : puts).push_back(q);
    }

    double maturity = expiry_days / 365.0;
    double forward;
    if (config.forward_override) forward = *config.forward_override;
    else if (forward_col) forward = *forward_col;
    else forward = imply_forward(calls, puts, rate, maturity);

    // Assemble the OTM strip: put mid for K <= F, call mid for K > F.
    std::map<double, double> otm;
    for (const auto& q : puts)
        if (q.strike <= forward) otm[q.strike] = q.mid();
    for (const auto& q : calls)
        if (q.strike > forward) otm[q.strike] = q.mid();

    OptionChain chain;
    chain.maturity = maturity;
    chain.rate = rate;
    chain.forward = forward;
    for (const auto& [k, p] : otm) {
        if (p < 0.0) throw std::runtime_error("load_chain: negative price");
        chain.strikes.push_back(k);
        chain.otm_prices.push_back(p);
    }
    if (chain.n() < config.min_strikes)
        throw std::runtime_error("load_chain: fewer than " + std::to_string(config.min_strikes) +
                                 " usable strikes");
    chain.grid = GridKind::of(chain.strikes);
    chain.validate();
    return chain;
}

void save_chain(const OptionChain& chain, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_chain: cannot open " + path);
    out << "expiry_days,rate,forward,strike,right,bid,ask\n";
    char buf[256];
    for (int i = 0; i < chain.n(); ++i) {
        const char* right = chain.strikes[i] <= chain.forward ? "P" : "C";
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g\n",
                      chain.maturity * 365.0, chain.rate, chain.forward, chain.strikes[i], right,
                      chain.otm_prices[i], chain.otm_prices[i]);
        out << buf;
    }
}

double imply_forward(const std::vector<OptionQuote>& calls, const std::vector<OptionQuote>& puts,
                     double rate, double maturity) {
    std::map<double, double> call_mid, put_mid;
    for (const auto& q : calls) call_mid[q.strike] = q.mid();
    for (const auto& q : puts) put_mid[q.strike] = q.mid();

    bool found = false;
    double best_gap = 0.0, best_strike = 0.0, best_diff = 0.0;
    for (const auto& [k, c] : call_mid) {
        auto it = put_mid.find(k);
        if (it == put_mid.end()) continue;
        double gap = std::abs(c - it->second);
        if (!found || gap < best_gap) {  // strict '<' keeps the lowest strike on ties
            found = true;
            best_gap = gap;
            best_strike = k;
            best_diff = c - it->second;
        }
    }
    if (!found)
        throw std::runtime_error("imply_forward: no strike with both call and put quotes");
    return best_strike + std::exp(rate * maturity) * best_diff;
}

double implied_vol(double price, double forward, double strike, double rate, double maturity,
                   Right right) {
    if (price <= 0.0 || forward <= 0.0 || strike <= 0.0 || maturity <= 0.0)
        throw std::domain_error("implied_vol: invalid inputs");
    const double df = std::exp(-rate * maturity);
    const double intrinsic =
        df * (right == Right::call ? std::max(forward - strike, 0.0) : std::max(strike - forward, 0.0));
    const double upper = df * (right == Right::call ? forward : strike);
    if (price <= intrinsic || price >= upper)
        throw std::domain_error("implied_vol: price outside no-arbitrage bounds");

    double lo = 1e-6, hi = 5.0;
    double f_lo = black::price(forward, strike, lo, rate, maturity, right) - price;
    double f_hi = black::price(forward, strike, hi, rate, maturity, right) - price;
    if (f_lo > 0.0 || f_hi < 0.0)
        throw std::domain_error("implied_vol: price not bracketed by sigma in [1e-6, 5]");

    double sigma = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double diff = black::price(forward, strike, sigma, rate, maturity, right) - price;
        if (std::abs(diff) < 1e-10) return sigma;
        (diff > 0.0 ? hi : lo) = sigma;
        double v = black::vega(forward, strike, sigma, rate, maturity);
        double next = v > 1e-14 ? sigma - diff / v : 0.5 * (lo + hi);
        sigma = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
    }
    return sigma;
}

OptionChain spline_iv_regrid(const OptionChain& chain, int m) {
    chain.validate();
    if (chain.n() < 4) throw std::invalid_argument("spline_iv_regrid: need n >= 4");
    if (m < chain.n())
        throw std::invalid_argument("spline_iv_regrid: m must be >= n (no information discarded)");

    std::vector<double> log_k(chain.n()), iv(chain.n());
    for (int i = 0; i < chain.n(); ++i) {
        log_k[i] = std::log(chain.strikes[i]);
        Right side = chain.strikes[i] <= chain.forward ? Right::put : Right::call;
        iv[i] = implied_vol(chain.otm_prices[i], chain.forward, chain.strikes[i], chain.rate,
                            chain.maturity, side);
    }
    CubicSpline spline(log_k, iv);

    OptionChain out;
    out.maturity = chain.maturity;
    out.rate = chain.rate;
    out.forward = chain.forward;
    out.strikes.resize(m);
    out.otm_prices.resize(m);
    const double a = chain.alpha(), b = chain.beta();
    for (int j = 0; j < m; ++j) {
        double k = a + (b - a) * static_cast<double>(j) / (m - 1);
        if (j == m - 1) k = b;
        double sigma = spline(std::log(k));
        out.strikes[j] = k;
        out.otm_prices[j] = black::otm(out.forward, k, sigma, out.rate, out.maturity);
    }
    out.otm_prices.front() = chain.otm_prices.front();  // endpoint quotes preserved exactly
    out.otm_prices.back() = chain.otm_prices.back();
    out.grid = GridKind::of(out.strikes);
    return out;
}

}  // namespace icos

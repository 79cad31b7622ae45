#include "cqinterp/sdpa_io.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace cqi {

namespace {

// Decimal rendering that re-parses to the same rational for terminating
// decimals; otherwise 17 significant digits.
std::string num_str(const Rat& r) {
    mpz_class den = r.get_den();
    mpz_class d = den;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d == 1) {
        int digits = std::max(twos, fives);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
        mpz_class scaled = r.get_num() * (scale / den);
        std::string s = scaled.get_str();
        bool neg = !s.empty() && s[0] == '-';
        if (neg) s = s.substr(1);
        if (digits == 0) return (neg ? "-" : "") + s;
        while (s.size() <= static_cast<size_t>(digits)) s = "0" + s;
        s.insert(s.size() - digits, ".");
        return (neg ? "-" : "") + s;
    }
    std::ostringstream os;
    os << std::setprecision(17) << to_double(r);
    return os.str();
}

struct ScalarSlots {
    // 1-based positions within the diagonal block; minus < 0 means absent.
    std::vector<int> plus, minus;
    int count{0};
};

ScalarSlots scalar_slots(const SdpProblem& p) {
    ScalarSlots s;
    int next = 1;
    for (auto& sc : p.scalars) {
        s.plus.push_back(next++);
        s.minus.push_back(sc.nonneg ? -1 : next++);
    }
    s.count = next - 1;
    return s;
}

} // namespace

void export_sdpa(const SdpProblem& prob, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    ScalarSlots slots = scalar_slots(prob);
    int nblocks = static_cast<int>(prob.blocks.size()) + (slots.count > 0 ? 1 : 0);

    out << "\"feasibility problem\n";
    for (size_t b = 0; b < prob.blocks.size(); ++b)
        out << "*block " << b + 1 << " " << prob.blocks[b].name << " "
            << (prob.blocks[b].slack_eligible ? 1 : 0) << "\n";
    for (size_t s = 0; s < prob.scalars.size(); ++s)
        out << "*scalar " << s << " " << prob.scalars[s].name << " "
            << (prob.scalars[s].nonneg ? 1 : 0) << "\n";
    out << prob.eq_constraints.size() << " = mDIM\n";
    out << nblocks << " = nBLOCK\n";
    for (size_t b = 0; b < prob.blocks.size(); ++b)
        out << prob.blocks[b].dim << (b + 1 < prob.blocks.size() || slots.count > 0 ? " " : "");
    if (slots.count > 0) out << -slots.count;
    out << "\n";
    for (size_t k = 0; k < prob.eq_constraints.size(); ++k)
        out << num_str(prob.eq_constraints[k].rhs)
            << (k + 1 < prob.eq_constraints.size() ? " " : "");
    out << "\n";

    int diag_block = static_cast<int>(prob.blocks.size()) + 1;
    for (size_t k = 0; k < prob.eq_constraints.size(); ++k) {
        // Accumulate then emit canonically (one line per nonzero, i <= j).
        std::map<std::tuple<int, int, int>, Rat> entries;
        for (const SdpTerm& t : prob.eq_constraints[k].terms) {
            if (t.kind == SdpTerm::Kind::BlockEntry) {
                int i = std::min(t.i, t.j) + 1, j = std::max(t.i, t.j) + 1;
                Rat v = (i == j) ? t.coeff : t.coeff / 2;
                entries[{t.index + 1, i, j}] += v;
            } else {
                int p = slots.plus[t.index];
                entries[{diag_block, p, p}] += t.coeff;
                if (slots.minus[t.index] > 0) {
                    int q = slots.minus[t.index];
                    entries[{diag_block, q, q}] -= t.coeff;
                }
            }
        }
        for (auto& [key, v] : entries) {
            if (v == 0) continue;
            auto [blk, i, j] = key;
            out << k + 1 << " " << blk << " " << i << " " << j << " " << num_str(v) << "\n";
        }
    }
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::string cur;
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '(' || c == ')' ||
            c == '{' || c == '}') {
            if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) toks.push_back(cur);
    return toks;
}

} // namespace

SdpProblem import_sdpa_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    SdpProblem prob;
    std::vector<std::pair<std::string, bool>> block_meta, scalar_meta;
    std::string line;
    int m = -1, nblocks = -1;
    std::vector<int> sizes;
    std::vector<Rat> rhs;
    int stage = 0;
    std::vector<std::array<std::string, 5>> raw_entries;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '*') {
            auto toks = tokenize(line.substr(1));
            if (toks.size() == 4 && toks[0] == "block")
                block_meta.emplace_back(toks[2], toks[3] == "1");
            else if (toks.size() == 4 && toks[0] == "scalar")
                scalar_meta.emplace_back(toks[2], toks[3] == "1");
            continue;
        }
        if (!line.empty() && (line[0] == '"' || line[0] == '!')) continue;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (stage == 0) {
            m = std::stoi(toks[0]);
            stage = 1;
        } else if (stage == 1) {
            nblocks = std::stoi(toks[0]);
            stage = 2;
        } else if (stage == 2) {
            for (auto& t : toks) {
                if (t == "=" ) break;
                sizes.push_back(std::stoi(t));
            }
            if (static_cast<int>(sizes.size()) >= nblocks) stage = 3;
        } else if (stage == 3) {
            for (auto& t : toks) rhs.push_back(parse_rational(t));
            if (static_cast<int>(rhs.size()) >= m) stage = 4;
        } else {
            if (toks.size() != 5) throw FormatError("bad entry line: " + line);
            raw_entries.push_back({toks[0], toks[1], toks[2], toks[3], toks[4]});
        }
    }
    if (m < 0 || nblocks < 0 || static_cast<int>(sizes.size()) != nblocks ||
        static_cast<int>(rhs.size()) != m)
        throw FormatError("incomplete SDPA header in " + path);

    int npsd = 0;
    for (int s : sizes)
        if (s > 0) ++npsd;
    for (int b = 0; b < npsd; ++b) {
        std::string name = b < static_cast<int>(block_meta.size()) ? block_meta[b].first
                                                                   : "block" + std::to_string(b);
        bool slack = b < static_cast<int>(block_meta.size()) ? block_meta[b].second : true;
        prob.add_block(name, sizes[b], slack);
    }
    ScalarSlots slots;
    if (!scalar_meta.empty()) {
        for (size_t s = 0; s < scalar_meta.size(); ++s)
            prob.add_scalar(scalar_meta[s].first, scalar_meta[s].second);
        slots = scalar_slots(prob);
    } else if (nblocks > npsd) {
        int k = -sizes[npsd];
        for (int s = 0; s < k; ++s) prob.add_scalar("scalar" + std::to_string(s), true);
        slots = scalar_slots(prob);
    }

    prob.eq_constraints.resize(m);
    for (int k = 0; k < m; ++k) prob.eq_constraints[k].rhs = rhs[k];
    for (auto& e : raw_entries) {
        int matno = std::stoi(e[0]);
        int blk = std::stoi(e[1]);
        int i = std::stoi(e[2]);
        int j = std::stoi(e[3]);
        Rat v = parse_rational(e[4]);
        if (matno == 0) {
            if (v != 0) throw FormatError("nonzero objective matrix in feasibility file");
            continue;
        }
        if (matno < 1 || matno > m) throw FormatError("matrix index out of range");
        SdpTerm t;
        if (blk <= npsd) {
            t.kind = SdpTerm::Kind::BlockEntry;
            t.index = blk - 1;
            t.i = std::min(i, j) - 1;
            t.j = std::max(i, j) - 1;
            t.coeff = (i == j) ? v : v * 2;
        } else {
            if (i != j) throw FormatError("off-diagonal entry in diagonal block");
            // Map the slot back to its scalar; skip shadow (minus) slots.
            t.kind = SdpTerm::Kind::Scalar;
            int idx = -1;
            for (size_t s = 0; s < slots.plus.size(); ++s)
                if (slots.plus[s] == i) idx = static_cast<int>(s);
            if (idx < 0) continue;
            t.index = idx;
            t.coeff = v;
        }
        prob.eq_constraints[matno - 1].terms.push_back(t);
    }
    return prob;
}

void export_sdpa_solution(const SdpSolution& sol, const SdpProblem& prob,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    ScalarSlots slots = scalar_slots(prob);
    out << "phase.value  = " << (sol.status == SdpStatus::Feasible ? "pdFEAS" : "pdINF") << "\n";
    out << "yMat = {\n";
    for (auto& b : prob.blocks) {
        auto it = sol.block_values.find(b.name);
        out << "{ ";
        for (int i = 0; i < b.dim; ++i) {
            out << "{";
            for (int j = 0; j < b.dim; ++j) {
                double v = it == sol.block_values.end() ? 0.0 : it->second(i, j);
                out << std::setprecision(17) << v << (j + 1 < b.dim ? "," : "");
            }
            out << (i + 1 < b.dim ? "},\n" : "} ");
        }
        out << "}\n";
    }
    if (slots.count > 0) {
        std::vector<double> diag(slots.count, 0.0);
        for (size_t s = 0; s < prob.scalars.size(); ++s) {
            auto it = sol.scalar_values.find(prob.scalars[s].name);
            double v = it == sol.scalar_values.end() ? 0.0 : it->second;
            diag[slots.plus[s] - 1] = std::max(v, 0.0);
            if (slots.minus[s] > 0) diag[slots.minus[s] - 1] = std::max(-v, 0.0);
        }
        out << "{ ";
        for (int i = 0; i < slots.count; ++i)
            out << std::setprecision(17) << diag[i] << (i + 1 < slots.count ? "," : " ");
        out << "}\n";
    }
    out << "}\n";
}

SdpSolution import_sdpa_solution(const std::string& path, const SdpProblem& prob) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto pos = all.find("yMat");
    if (pos == std::string::npos) throw FormatError("no yMat section in " + path);
    pos = all.find('=', pos);
    if (pos == std::string::npos) throw FormatError("malformed yMat section");
    // Collect all numbers after "yMat =".
    std::vector<double> nums;
    std::string cur;
    auto flush = [&]() {
        if (!cur.empty()) {
            try {
                nums.push_back(std::stod(cur));
            } catch (...) {
                throw FormatError("bad number in yMat: " + cur);
            }
            cur.clear();
        }
    };
    for (size_t k = pos + 1; k < all.size(); ++k) {
        char c = all[k];
        if ((c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E') {
            cur += c;
        } else {
            flush();
            if (std::isalpha(static_cast<unsigned char>(c))) break; // next section
        }
    }
    flush();

    ScalarSlots slots = scalar_slots(prob);
    size_t need = 0;
    for (auto& b : prob.blocks) need += static_cast<size_t>(b.dim) * b.dim;
    need += slots.count;
    if (nums.size() < need)
        throw FormatError("yMat has " + std::to_string(nums.size()) + " values, expected " +
                          std::to_string(need));

    SdpSolution sol;
    sol.status = all.find("pdFEAS") != std::string::npos || all.find("pdOPT") != std::string::npos
                     ? SdpStatus::Feasible
                     : SdpStatus::Unknown;
    size_t k = 0;
    double min_eig = 0.0;
    bool first = true;
    for (auto& b : prob.blocks) {
        Eigen::MatrixXd m(b.dim, b.dim);
        for (int i = 0; i < b.dim; ++i)
            for (int j = 0; j < b.dim; ++j) m(i, j) = nums[k++];
        m = 0.5 * (m + m.transpose().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        double lo = b.dim ? es.eigenvalues().minCoeff() : 0.0;
        if (first || lo < min_eig) min_eig = lo;
        first = false;
        sol.block_values[b.name] = m;
    }
    std::vector<double> diag(slots.count, 0.0);
    for (int i = 0; i < slots.count; ++i) diag[i] = nums[k++];
    for (size_t s = 0; s < prob.scalars.size(); ++s) {
        double v = diag.empty() ? 0.0 : diag[slots.plus[s] - 1];
        if (slots.minus[s] > 0) v -= diag[slots.minus[s] - 1];
        sol.scalar_values[prob.scalars[s].name] = v;
    }
    sol.min_eig = min_eig;
    return sol;
}

} // namespace cqi

#include "putraffic/sample_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace putraffic {

namespace {

constexpr const char* kMagic = "# putraffic-samples v1";

[[noreturn]] void bad(const std::string& msg) {
    throw std::invalid_argument("sample file: " + msg);
}

}  // namespace

void write_samples(const SampleVector& samples, std::ostream& out) {
    if (samples.size() < 2) bad("the file format needs at least two samples");
    out << kMagic << '\n';
    out << "n " << samples.size() << '\n';
    out.precision(17);
    if (samples.plan.is_uniform()) {
        out << "gaps uniform " << samples.plan.gaps().front() << '\n';
    } else {
        out << "gaps list";
        for (double g : samples.plan.gaps()) out << ' ' << g;
        out << '\n';
    }
    out << "bits ";
    for (std::uint8_t b : samples.bits) out << (b ? '1' : '0');
    out << '\n';
}

void write_samples_file(const SampleVector& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out) bad("cannot open for writing: " + path);
    write_samples(samples, out);
}

SampleVector read_samples(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kMagic) bad("missing header line");

    std::size_t n = 0;
    {
        if (!std::getline(in, line)) bad("missing sample count");
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key >> n) || key != "n" || n < 2) bad("bad sample count line");
    }

    std::vector<double> gaps;
    {
        if (!std::getline(in, line)) bad("missing gaps");
        std::istringstream ls(line);
        std::string key, mode;
        if (!(ls >> key >> mode) || key != "gaps") bad("bad gaps line");
        if (mode == "uniform") {
            double g = 0.0;
            if (!(ls >> g) || !(g > 0.0)) bad("bad uniform gap");
            gaps.assign(n - 1, g);
        } else if (mode == "list") {
            double g = 0.0;
            while (ls >> g) gaps.push_back(g);
            if (gaps.size() != n - 1) bad("gap list length must be n-1");
        } else {
            bad("gaps mode must be 'uniform' or 'list'");
        }
    }

    std::vector<std::uint8_t> bits;
    {
        if (!std::getline(in, line)) bad("missing bits");
        std::istringstream ls(line);
        std::string key, payload;
        if (!(ls >> key >> payload) || key != "bits") bad("bad bits line");
        if (payload.size() != n) bad("bit string length must be n");
        bits.reserve(n);
        for (char c : payload) {
            if (c != '0' && c != '1') bad("bits must be 0 or 1");
            bits.push_back(c == '1' ? 1 : 0);
        }
    }
    return SampleVector(std::move(bits), SamplingPlan(std::move(gaps)));
}

SampleVector read_samples_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open: " + path);
    return read_samples(in);
}

}  // namespace putraffic

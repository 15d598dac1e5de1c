#include "isingmdp/snapshot.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace isingmdp {

namespace {
std::string shortest_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}
}  // namespace

std::string write_snapshot(const Configuration& config, double h) {
    std::string out;
    const int n = config.n();
    out += std::to_string(n);
    out += ' ';
    out += shortest_double(h);
    out += '\n';
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) out += config.at(x, y) > 0 ? '+' : '-';
        out += '\n';
    }
    return out;
}

std::pair<Configuration, double> read_snapshot(const std::string& text) {
    std::istringstream in(text);
    int n = 0;
    double h = 0.0;
    if (!(in >> n >> h)) throw std::invalid_argument("snapshot header must be \"N h\"");
    std::string line;
    std::getline(in, line);
    Configuration config = Configuration::all_minus(n);
    for (int y = 0; y < n; ++y) {
        if (!std::getline(in, line) || int(line.size()) != n)
            throw std::invalid_argument("snapshot row " + std::to_string(y) + " malformed");
        for (int x = 0; x < n; ++x) {
            if (line[x] != '+' && line[x] != '-')
                throw std::invalid_argument("snapshot cells must be '+' or '-'");
            config.set(x, y, line[x] == '+' ? +1 : -1);
        }
    }
    return {std::move(config), h};
}

void save_snapshot_file(const std::string& path, const Configuration& config, double h) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << write_snapshot(config, h);
}

std::pair<Configuration, double> load_snapshot_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return read_snapshot(buf.str());
}

}  // namespace isingmdp

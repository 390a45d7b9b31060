#include "aqil/weights_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "aqil/csv.hpp"
#include "aqil/errors.hpp"

namespace aqil {

void write_weights(std::ostream& out, const QNetwork<double>& net) {
    out << "# architecture ";
    const auto arch = net.architecture();
    for (std::size_t i = 0; i < arch.size(); ++i) out << (i ? "," : "") << arch[i];
    out << "\nlayer,kind,row,col,value\n";
    for (const auto& rec : export_weights(net)) {
        out << rec.layer << ',' << (rec.kind == ParamKind::Weight ? "weight" : "bias") << ','
            << rec.row << ',' << rec.col << ',' << format_double(rec.value) << '\n';
    }
}

void write_weights(const std::filesystem::path& path, const QNetwork<double>& net) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_weights(out, net);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

QNetwork<double> read_weights(std::istream& in) {
    std::string line;
    const std::string prefix = "# architecture ";
    if (!std::getline(in, line) || line.rfind(prefix, 0) != 0)
        throw std::invalid_argument("weights: missing architecture line");
    std::vector<int> arch;
    for (const auto& field : split(std::string_view(line).substr(prefix.size()), ','))
        arch.push_back(static_cast<int>(parse_int(field)));
    if (!std::getline(in, line) || trim(line) != "layer,kind,row,col,value")
        throw std::invalid_argument("weights: missing column header");

    std::vector<WeightRecord<double>> records;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 5) throw std::invalid_argument("weights: malformed record '" + line + "'");
        const auto kind = trim(f[1]);
        if (kind != "weight" && kind != "bias")
            throw std::invalid_argument("weights: unknown kind '" + std::string(kind) + "'");
        records.push_back({static_cast<int>(parse_int(f[0])),
                           kind == "weight" ? ParamKind::Weight : ParamKind::Bias,
                           static_cast<int>(parse_int(f[2])), static_cast<int>(parse_int(f[3])),
                           parse_double(f[4])});
    }
    return import_weights<double>(arch, records);
}

QNetwork<double> read_weights(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    return read_weights(in);
}

}  // namespace aqil

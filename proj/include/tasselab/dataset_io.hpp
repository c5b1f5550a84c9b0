#pragma once

#include <array>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tasselab/errors.hpp"
#include "tasselab/simulate.hpp"

// On-disk dataset layout:
//   img_00000.pgm ... img_NNNNN.pgm   binary PGM (P5, maxval 255), tea = 0
//                                     (black), cup = 255 (white); index = round,
//                                     img_00000.pgm is the base reading I_0
//   manifest.csv                      round,filename,label,tea_count  (LF, UTF-8)
//   config.json                       generating config + provenance hash

namespace tasselab {

namespace fs = std::filesystem;

inline std::string image_filename(int round) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "img_%05d.pgm", round);
    return buf;
}

inline void write_pgm(const TeaImage& img, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open for writing: " + path.string());
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(img.width()));
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x)
            row[static_cast<std::size_t>(x)] = img.tea_at(x, y) ? 0 : 255;
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw data_error("write failed: " + path.string());
}

inline TeaImage read_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open: " + path.string());

    auto next_token = [&](const char* what) {
        std::string token;
        int c;
        while ((c = in.get()) != EOF) {
            if (c == '#') {  // comment runs to end of line
                while ((c = in.get()) != EOF && c != '\n') {}
                continue;
            }
            if (std::isspace(c)) continue;
            token.push_back(static_cast<char>(c));
            while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#')
                token.push_back(static_cast<char>(in.get()));
            return token;
        }
        throw data_error(path.string() + ": truncated header, expected " + std::string(what));
    };

    const std::string magic = next_token("magic number");
    if (magic != "P5")
        throw data_error(path.string() + ": bad magic number '" + magic + "', expected P5");

    auto parse_int = [&](const std::string& token, const char* what) {
        try {
            std::size_t used = 0;
            const int value = std::stoi(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            return value;
        } catch (const std::exception&) {
            throw data_error(path.string() + ": invalid " + std::string(what) + " '" + token + "'");
        }
    };

    const int width = parse_int(next_token("width"), "width");
    const int height = parse_int(next_token("height"), "height");
    const int maxval = parse_int(next_token("maxval"), "maxval");
    if (width <= 0 || height <= 0)
        throw data_error(path.string() + ": non-positive dimensions");
    if (maxval != 255) throw data_error(path.string() + ": maxval must be 255");
    in.get();  // single whitespace byte after maxval

    TeaImage img(width, height);
    std::vector<unsigned char> raw(img.size());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw data_error(path.string() + ": truncated pixel data");
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == 0) img.set(i, true);
        else if (raw[i] != 255)
            throw data_error(path.string() + ": pixel value " + std::to_string(raw[i]) +
                             " is neither 0 (tea) nor 255 (cup)");
    }
    return img;
}

inline nlohmann::ordered_json config_to_json(const SimConfig& cfg) {
    nlohmann::ordered_json j;
    j["schema"] = "tasselab.dataset/v1";
    j["width"] = cfg.width;
    j["height"] = cfg.height;
    j["k_change"] = cfg.k_change;
    j["sampling_mode"] = to_string(cfg.mode);
    j["rounds"] = cfg.rounds;
    j["base"] = {{"tea_fraction", cfg.base.tea_fraction},
                 {"blob_count", cfg.base.blob_count},
                 {"seed", cfg.base.seed}};
    j["seed"] = cfg.seed;
    return j;
}

inline SimConfig config_from_json(const nlohmann::json& j, const std::string& where) {
    try {
        SimConfig cfg;
        cfg.width = j.at("width").get<int>();
        cfg.height = j.at("height").get<int>();
        cfg.k_change = j.at("k_change").get<int>();
        cfg.mode = sampling_mode_from_string(j.at("sampling_mode").get<std::string>());
        cfg.rounds = j.at("rounds").get<int>();
        cfg.base.tea_fraction = j.at("base").at("tea_fraction").get<double>();
        cfg.base.blob_count = j.at("base").at("blob_count").get<int>();
        cfg.base.seed = j.at("base").at("seed").get<std::uint64_t>();
        cfg.seed = j.at("seed").get<std::uint64_t>();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(where + ": malformed config: " + e.what());
    }
}

struct ExportManifest {
    fs::path directory;
    std::size_t record_count = 0;
    std::string provenance;
};

inline ExportManifest export_dataset(const Dataset& ds, const fs::path& directory) {
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) throw data_error("cannot create directory " + directory.string() + ": " + ec.message());

    write_pgm(ds.base_image, directory / image_filename(0));
    for (const auto& rec : ds.records) write_pgm(rec.image, directory / image_filename(rec.round));

    const fs::path manifest_path = directory / "manifest.csv";
    {
        std::ofstream manifest(manifest_path, std::ios::binary);
        if (!manifest) throw data_error("cannot open for writing: " + manifest_path.string());
        manifest << "round,filename,label,tea_count\n";
        for (const auto& rec : ds.records)
            manifest << rec.round << "," << image_filename(rec.round) << "," << to_int(rec.label)
                     << "," << rec.image.tea_count() << "\n";
        if (!manifest) throw data_error("write failed: " + manifest_path.string());
    }

    {
        nlohmann::ordered_json j = config_to_json(ds.config);
        j["relabeled"] = ds.relabeled;
        j["provenance_hash"] = ds.provenance;
        const fs::path config_path = directory / "config.json";
        std::ofstream out(config_path, std::ios::binary);
        if (!out) throw data_error("cannot open for writing: " + config_path.string());
        out << j.dump(2) << "\n";
        if (!out) throw data_error("write failed: " + config_path.string());
    }

    return {directory, ds.size(), ds.provenance};
}

inline Dataset import_dataset(const fs::path& directory) {
    const fs::path config_path = directory / "config.json";
    std::ifstream config_in(config_path, std::ios::binary);
    if (!config_in) throw data_error("cannot open: " + config_path.string());
    nlohmann::json config_json;
    try {
        config_in >> config_json;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(config_path.string() + ": invalid JSON: " + e.what());
    }

    Dataset ds;
    ds.config = config_from_json(config_json, config_path.string());
    ds.relabeled = config_json.value("relabeled", false);
    ds.provenance = config_json.value("provenance_hash", "");
    const std::string expected = provenance_hash(ds.config);
    if (!ds.provenance.empty() && ds.provenance != expected)
        throw data_error(config_path.string() + ": provenance hash does not match config fields");
    ds.provenance = expected;

    ds.base_image = read_pgm(directory / image_filename(0));

    const fs::path manifest_path = directory / "manifest.csv";
    std::ifstream manifest(manifest_path, std::ios::binary);
    if (!manifest) throw data_error("cannot open: " + manifest_path.string());

    std::string line;
    if (!std::getline(manifest, line) || line != "round,filename,label,tea_count")
        throw data_error(manifest_path.string() + ":1: bad or missing header row");

    int line_no = 1;
    while (std::getline(manifest, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = manifest_path.string() + ":" + std::to_string(line_no);

        std::array<std::string, 4> fields;
        {
            std::stringstream ss(line);
            std::string field;
            std::size_t count = 0;
            while (std::getline(ss, field, ',')) {
                if (count >= fields.size()) throw data_error(where + ": too many fields");
                fields[count++] = field;
            }
            if (count != fields.size()) throw data_error(where + ": expected 4 fields");
        }

        DatasetRecord rec;
        std::size_t stated_count = 0;
        try {
            rec.round = std::stoi(fields[0]);
            rec.label = flip_from_int(std::stoi(fields[2]));
            stated_count = static_cast<std::size_t>(std::stoull(fields[3]));
        } catch (const data_error&) {
            throw;
        } catch (const std::exception& e) {
            throw data_error(where + ": " + e.what());
        }
        if (rec.round != static_cast<int>(ds.records.size()) + 1)
            throw data_error(where + ": rounds must be consecutive 1..N, got " + fields[0]);
        if (!ds.relabeled && rec.label != coin_outcome(rec.round))
            throw data_error(where + ": label " + fields[2] +
                             " contradicts the deterministic flip for round " + fields[0] +
                             " (dataset is not marked relabeled)");
        rec.image = read_pgm(directory / fields[1]);
        if (rec.image.tea_count() != stated_count)
            throw data_error(where + ": tea_count " + fields[3] + " does not match image (" +
                             std::to_string(rec.image.tea_count()) + ")");
        ds.records.push_back(std::move(rec));
    }

    if (ds.records.size() != static_cast<std::size_t>(ds.config.rounds))
        throw data_error(manifest_path.string() + ": row count " +
                         std::to_string(ds.records.size()) + " does not match config rounds " +
                         std::to_string(ds.config.rounds));
    return ds;
}

}  // namespace tasselab

#include "mnet/harness.hpp"

#include "mnet/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace mnet::harness {
namespace {

// 3x5 glyphs for the tile annotations, row-major bits (msb = left column).
constexpr std::array<std::uint8_t, 5> glyph(char c) {
    switch (c) {
        case '0': return {0b111, 0b101, 0b101, 0b101, 0b111};
        case '1': return {0b010, 0b110, 0b010, 0b010, 0b111};
        case '2': return {0b111, 0b001, 0b111, 0b100, 0b111};
        case '3': return {0b111, 0b001, 0b111, 0b001, 0b111};
        case '4': return {0b101, 0b101, 0b111, 0b001, 0b001};
        case '5': return {0b111, 0b100, 0b111, 0b001, 0b111};
        case '6': return {0b111, 0b100, 0b111, 0b101, 0b111};
        case '7': return {0b111, 0b001, 0b010, 0b010, 0b010};
        case '8': return {0b111, 0b101, 0b111, 0b101, 0b111};
        case '9': return {0b111, 0b101, 0b111, 0b001, 0b111};
        case '>': return {0b100, 0b010, 0b001, 0b010, 0b100};
        default: return {0, 0, 0, 0, 0};
    }
}

struct Canvas {
    int height = 0, width = 0;
    std::vector<std::uint8_t> pixels;

    Canvas(int h, int w) : height(h), width(w), pixels(static_cast<std::size_t>(h) * w, 0) {}

    void set(int r, int c, std::uint8_t v) {
        if (r >= 0 && r < height && c >= 0 && c < width)
            pixels[static_cast<std::size_t>(r) * width + c] = v;
    }
};

void draw_text(Canvas& canvas, int top, int left, const std::string& text) {
    int x = left;
    for (char c : text) {
        const auto g = glyph(c);
        for (int r = 0; r < 5; ++r)
            for (int b = 0; b < 3; ++b)
                if (g[r] & (0b100 >> b)) canvas.set(top + r, x + b, 255);
        x += 4;
    }
}

struct Miss {
    std::size_t index;
    int true_label, predicted;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

} // namespace

std::size_t report_misclassified(const std::string& decision_log_path, const Dataset& test,
                                 const std::string& out_prefix) {
    std::ifstream log(decision_log_path);
    if (!log) throw DataError("cannot open decision log " + decision_log_path);

    std::string line;
    if (!std::getline(log, line)) throw DataError("empty decision log " + decision_log_path);

    std::vector<Miss> misses;
    std::size_t rows = 0;
    while (std::getline(log, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < 3)
            throw DataError("malformed decision log row: " + line);
        const std::size_t index = std::stoull(fields[0]);
        if (index >= test.size())
            throw DataError("decision log index out of range: " + fields[0] + " >= " +
                            std::to_string(test.size()));
        const int true_label = std::stoi(fields[1]);
        const int predicted = std::stoi(fields[2]);
        ++rows;
        if (true_label != predicted) misses.push_back({index, true_label, predicted});
    }
    if (rows != test.size())
        throw DataError("decision log covers " + std::to_string(rows) + " samples, test set has " +
                        std::to_string(test.size()) + ": index range mismatch");

    {
        std::ofstream csv(out_prefix + ".csv", std::ios::trunc);
        if (!csv) throw DataError("cannot write " + out_prefix + ".csv");
        csv << "index,true,predicted\n";
        for (const auto& m : misses)
            csv << m.index << ',' << m.true_label << ',' << m.predicted << '\n';
    }

    const int img_h = test.image_height(), img_w = test.image_width();
    const int label_h = 7; // 5-row font + padding
    const int tile_h = img_h + label_h + 1, tile_w = std::max(img_w, 13) + 1;
    const int columns = misses.empty() ? 1 : std::min<std::size_t>(misses.size(), 16);
    const int grid_rows =
        misses.empty() ? 1 : static_cast<int>((misses.size() + columns - 1) / columns);

    Canvas canvas(misses.empty() ? 1 : grid_rows * tile_h,
                  misses.empty() ? 1 : columns * tile_w);
    for (std::size_t k = 0; k < misses.size(); ++k) {
        const auto& m = misses[k];
        const int top = static_cast<int>(k / columns) * tile_h;
        const int left = static_cast<int>(k % columns) * tile_w;
        const Image& img = test.images()[m.index];
        for (int r = 0; r < img.height; ++r)
            for (int c = 0; c < img.width; ++c)
                canvas.set(top + r, left + c,
                           static_cast<std::uint8_t>(std::lround(img.at(r, c) * 255.0)));
        draw_text(canvas, top + img_h + 1, left,
                  std::to_string(m.true_label) + ">" + std::to_string(m.predicted));
    }

    std::ofstream pgm(out_prefix + ".pgm", std::ios::binary | std::ios::trunc);
    if (!pgm) throw DataError("cannot write " + out_prefix + ".pgm");
    pgm << "P5\n" << canvas.width << ' ' << canvas.height << "\n255\n";
    pgm.write(reinterpret_cast<const char*>(canvas.pixels.data()),
              static_cast<std::streamsize>(canvas.pixels.size()));
    if (!pgm) throw DataError("short write to " + out_prefix + ".pgm");
    return misses.size();
}

} // namespace mnet::harness

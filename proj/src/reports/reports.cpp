#include "bondsim/reports/reports.hpp"

#include "bondsim/util/sha256.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

namespace bondsim::reports {

ContentId ContentId::of(std::string_view bytes)
{
    return ContentId(sha256_hex(bytes));
}

std::optional<ContentId> ContentId::parse(std::string_view text)
{
    const bool ok = text.size() == 64 && std::all_of(text.begin(), text.end(), [](char c) {
                        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
                    });
    if (!ok) {
        return std::nullopt;
    }
    return ContentId(std::string(text));
}

std::string ReportNote::prefix(AppId app)
{
    return std::to_string(raw(app)) + "+";
}

std::string ReportNote::render() const
{
    return prefix(app) + cid.hex();
}

std::optional<ReportNote> ReportNote::parse(std::string_view note)
{
    const auto plus = note.find('+');
    if (plus == std::string_view::npos || plus == 0) {
        return std::nullopt;
    }
    const std::string_view digits = note.substr(0, plus);
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        return std::nullopt;
    }
    std::uint64_t id = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        return std::nullopt;
    }
    auto cid = ContentId::parse(note.substr(plus + 1));
    if (!cid) {
        return std::nullopt;
    }
    return ReportNote{AppId{id}, *cid};
}

ReportStore::ReportStore(std::filesystem::path directory) : dir_(std::move(directory))
{
    std::filesystem::create_directories(*dir_);
}

ContentId ReportStore::store(std::string_view bytes)
{
    ContentId cid = ContentId::of(bytes);
    blobs_.try_emplace(cid, bytes);
    if (dir_) {
        const auto path = *dir_ / cid.hex();
        if (!std::filesystem::exists(path)) {
            std::ofstream out(path, std::ios::binary);
            out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            if (!out) {
                throw std::runtime_error("cannot write " + path.string());
            }
        }
    }
    return cid;
}

std::string ReportStore::fetch(const ContentId& cid) const
{
    if (auto it = blobs_.find(cid); it != blobs_.end()) {
        return it->second;
    }
    if (dir_) {
        std::ifstream in(*dir_ / cid.hex(), std::ios::binary);
        if (in) {
            std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            blobs_.emplace(cid, bytes);
            return bytes;
        }
    }
    throw UnknownContent("no content stored under " + cid.hex());
}

bool ReportStore::contains(const ContentId& cid) const
{
    return blobs_.contains(cid) || (dir_ && std::filesystem::exists(*dir_ / cid.hex()));
}

TransactionGroup anchor(const Address& issuer, AppId manage_app, const ContentId& cid)
{
    Transaction t = make_payment(issuer, issuer, 0);
    t.note = ReportNote{manage_app, cid}.render();
    if (t.note.size() > kMaxNoteBytes) {
        throw std::length_error("report note exceeds " + std::to_string(kMaxNoteBytes) + " bytes");
    }
    return TransactionGroup{std::move(t)};
}

std::vector<ContentId> list_reports(const Ledger& ledger, const Address& issuer, AppId manage_app)
{
    const std::string prefix = ReportNote::prefix(manage_app);
    std::vector<ContentId> out;
    for (const CommittedTxn& c : ledger.history()) {
        if (c.txn.sender != issuer || c.txn.note.rfind(prefix, 0) != 0) {
            continue;
        }
        if (auto note = ReportNote::parse(c.txn.note); note && note->app == manage_app) {
            out.push_back(note->cid);
        }
    }
    return out;
}

} // namespace bondsim::reports

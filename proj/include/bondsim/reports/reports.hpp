#pragma once

#include "bondsim/ledger/ledger.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bondsim::reports {

// Lowercase hex SHA-256 of the stored bytes.
class ContentId {
public:
    static ContentId of(std::string_view bytes);
    // Accepts exactly 64 lowercase hex digits.
    static std::optional<ContentId> parse(std::string_view text);

    const std::string& hex() const { return hex_; }
    friend auto operator<=>(const ContentId&, const ContentId&) = default;

private:
    explicit ContentId(std::string hex) : hex_(std::move(hex)) {}
    std::string hex_;
};

// Wire form "<app id>+<cid>".
struct ReportNote {
    AppId app{};
    ContentId cid;

    std::string render() const;
    static std::optional<ReportNote> parse(std::string_view note);
    static std::string prefix(AppId app);
};

class UnknownContent : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Content-addressed blob store. In memory by default; when opened on a
// directory every blob is also written to <dir>/<cid> and fetches fall back to
// disk, so separate processes can share a store.
class ReportStore {
public:
    ReportStore() = default;
    explicit ReportStore(std::filesystem::path directory);

    ContentId store(std::string_view bytes);
    // Throws UnknownContent for ids that were never stored.
    std::string fetch(const ContentId& cid) const;
    bool contains(const ContentId& cid) const;
    std::size_t size() const { return blobs_.size(); }

private:
    std::optional<std::filesystem::path> dir_;
    mutable std::map<ContentId, std::string> blobs_;
};

// Zero-amount self-payment carrying the note. Throws std::length_error if the
// note would not fit in a transaction.
TransactionGroup anchor(const Address& issuer, AppId manage_app, const ContentId& cid);

// Ids anchored by `issuer` for `manage_app`, in ledger order.
std::vector<ContentId> list_reports(const Ledger& ledger, const Address& issuer, AppId manage_app);

} // namespace bondsim::reports

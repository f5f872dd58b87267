#ifndef POSTVRP_MD5_HPP
#define POSTVRP_MD5_HPP

#include <memory>
#include <string>
#include <string_view>

#include <openssl/evp.h>

#include "error.hpp"

namespace postvrp {

/// Incremental MD5 over OpenSSL's EVP interface; digest() is lowercase hex.
class Md5 {
public:
    Md5() : ctx_(EVP_MD_CTX_new()) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_md5(), nullptr) != 1)
            throw Error("md5: digest initialisation failed");
    }

    Md5& update(std::string_view bytes) {
        if (EVP_DigestUpdate(ctx_.get(), bytes.data(), bytes.size()) != 1)
            throw Error("md5: update failed");
        return *this;
    }

    std::string digest() {
        unsigned char raw[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx_.get(), raw, &len) != 1)
            throw Error("md5: finalisation failed");
        static constexpr char hex[] = "0123456789abcdef";
        std::string out;
        for (unsigned int i = 0; i < len; ++i) {
            out.push_back(hex[raw[i] >> 4]);
            out.push_back(hex[raw[i] & 0xF]);
        }
        return out;
    }

private:
    struct Free {
        void operator()(EVP_MD_CTX* c) const noexcept { EVP_MD_CTX_free(c); }
    };
    std::unique_ptr<EVP_MD_CTX, Free> ctx_;
};

inline std::string md5_hex(std::string_view bytes) { return Md5().update(bytes).digest(); }

}

#endif

#!/usr/bin/env python3
# Copyright (C) 2026 The Androscan Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the fixture APKs and trace files under tests/fixtures/.

Usage: build_fixtures.py [OUT_DIR]

Everything is deterministic (fixed zip timestamps, seeded RNG), so the
committed binaries can be rebuilt byte-for-byte.
"""

import io
import json
import os
import random
import struct
import sys
import zipfile

from axmlwriter import ANDROID_NS, AxmlBuilder
from dexwriter import ClassDef, DexBuilder, Method

A = ANDROID_NS
FIXED_TIME = (2022, 11, 1, 10, 0, 0)

OBJECT = "Ljava/lang/Object;"
STRING = "Ljava/lang/String;"
URL = "Ljava/net/URL;"
HTTP_URL_CONNECTION = "Ljava/net/HttpURLConnection;"

URL_INIT = (URL, "<init>", "V", (STRING,))
URL_OPEN = (URL, "openConnection", "Ljava/net/URLConnection;", ())
HUC_CONNECT = (HTTP_URL_CONNECTION, "connect", "V", ())
HUC_SET_METHOD = (HTTP_URL_CONNECTION, "setRequestMethod", "V", (STRING,))


def object_init(cls_super=OBJECT):
    return Method("<init>", code=[("invoke-direct", (cls_super, "<init>", "V", ()), [0]),
                                  ("return-void",)])


def strings_method(name, strings):
    code = [("const-string", 0, s) for s in strings]
    code.append(("return-void",))
    return Method(name, code=code, direct=False)


def perm(name):
    return ("uses-permission", [(A, "name", name)], [])


def manifest(package, elements, sdk=None):
    children = []
    if sdk:
        children.append(("uses-sdk", [(A, "minSdkVersion", sdk[0]), (A, "targetSdkVersion", sdk[1])], []))
    children.extend(elements)
    return ("manifest", [(A, "versionCode", 1), (A, "versionName", "1.0"), (None, "package", package)],
            children)


def write_apk(path, entries, signing_block=False):
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as zf:
        for name, data, method in entries:
            info = zipfile.ZipInfo(name, FIXED_TIME)
            info.compress_type = method
            info.external_attr = 0o644 << 16
            zf.writestr(info, data)
    blob = buf.getvalue()
    if signing_block:
        blob = insert_signing_block(blob)
    with open(path, "wb") as f:
        f.write(blob)


def insert_signing_block(blob):
    """Inserts an APK-signature-scheme-v2-shaped block before the central directory."""
    eocd = blob.rfind(b"PK\x05\x06")
    cd_size, cd_off = struct.unpack_from("<II", blob, eocd + 12)
    pair_payload = b"\x00" * 32
    pairs = struct.pack("<QI", 4 + len(pair_payload), 0x7109871A) + pair_payload
    size = len(pairs) + 8 + 16
    block = struct.pack("<Q", size) + pairs + struct.pack("<Q", size) + b"APK Sig Block 42"
    out = bytearray(blob[:cd_off] + block + blob[cd_off:])
    new_eocd = eocd + len(block)
    struct.pack_into("<I", out, new_eocd + 16, cd_off + len(block))
    return bytes(out)


# ---------------------------------------------------------------------------
# sample: one class, spec-style strings, URL.openConnection + HttpURLConnection.connect


def build_sample(out):
    dex = DexBuilder()
    main = "Lcom/example/sample/MainActivity;"
    dex.add_class(ClassDef(main, "Landroid/app/Activity;", [
        Method("<init>", code=[("invoke-direct", ("Landroid/app/Activity;", "<init>", "V", ()), [0]),
                               ("return-void",)]),
        Method("fetch", direct=False, code=[
            ("const-string", 0, "https://api.example.com/v1/login"),
            ("new-instance", 1, URL),
            ("invoke-direct", URL_INIT, [1, 0]),
            ("invoke-virtual", URL_OPEN, [1]),
            ("move-result-object", 2),
            ("check-cast", 2, HTTP_URL_CONNECTION),
            ("invoke-virtual", HUC_CONNECT, [2]),
            ("const-string", 0, "hello"),
            ("return-void",),
        ]),
    ], source_file="MainActivity.java"))
    dex.add_class(ClassDef("Lcom/example/sample/Util;", OBJECT, [
        object_init(),
        strings_method("constants", [
            "fonts.gstatic.com/s/font.woff",
            "content://com.example.sample.provider/items",
            "file:///sdcard/Download/report.txt",
            "café \U0001F600",
            "a\u0000b",
        ]),
    ]))
    # Referenced but never invoked from a defined class.
    dex.ref_method("Ljava/net/URLEncoder;", "encode", STRING, (STRING, STRING))
    classes = dex.build()

    m = manifest("com.example.sample", [
        ("application", [(A, "label", "Sample")], [
            ("activity", [(A, "name", "MainActivity"), (A, "exported", True)], []),
            ("service", [(A, "name", ".SyncService")], []),
            ("meta-data", [(A, "name", "com.example.sample.API_KEY"), (A, "value", "x9fQ2mLk8ZpR4tWv7YbN")], []),
        ]),
    ], sdk=(21, 33))
    axml = AxmlBuilder(utf8=False, unknown_chunk=True).build(m)
    write_apk(os.path.join(out, "sample.apk"), [
        ("AndroidManifest.xml", axml, zipfile.ZIP_DEFLATED),
        ("classes.dex", classes, zipfile.ZIP_DEFLATED),
        ("resources.arsc", b"\x02\x00\x0c\x00" + b"\x00" * 60, zipfile.ZIP_STORED),
        ("res/layout/main.xml", b"\x03\x00\x08\x00" + b"\x00" * 28, zipfile.ZIP_DEFLATED),
    ])
    return axml, classes


# ---------------------------------------------------------------------------
# bank: modelled after a deliberately vulnerable banking app


BANK_PKG = "com.android.insecurebankv2"
BANK = "Lcom/android/insecurebankv2/"
HTTP_POST = "Lorg/apache/http/client/methods/HttpPost;"
DEFAULT_CLIENT = "Lorg/apache/http/impl/client/DefaultHttpClient;"
HTTP_PARAMS = "Lorg/apache/http/params/HttpParams;"
CONN_PARAMS = "Lorg/apache/http/params/HttpConnectionParams;"


def bank_post_method(path):
    return Method("postData", direct=False, code=[
        ("const-string", 0, "http://"),
        ("const-string", 1, ":"),
        ("const-string", 2, path),
        ("new-instance", 3, HTTP_POST),
        ("invoke-direct", (HTTP_POST, "<init>", "V", (STRING,)), [3, 2]),
        ("new-instance", 4, DEFAULT_CLIENT),
        ("invoke-direct", (DEFAULT_CLIENT, "<init>", "V", ()), [4]),
        ("invoke-virtual", (DEFAULT_CLIENT, "getParams", HTTP_PARAMS, ()), [4]),
        ("move-result-object", 5),
        ("invoke-static", (CONN_PARAMS, "setConnectionTimeout", "V", (HTTP_PARAMS, "I")), [5, 1]),
        ("invoke-virtual", (DEFAULT_CLIENT, "execute", "Lorg/apache/http/HttpResponse;",
                            ("Lorg/apache/http/client/methods/HttpUriRequest;",)), [4, 3]),
        ("return-void",),
    ])


def build_bank(out):
    dex = DexBuilder()
    for cls, path in (("ChangePassword", "/changepassword"), ("DoLogin", "/login"),
                      ("DoTransfer", "/dotransfer")):
        dex.add_class(ClassDef(BANK + cls + ";", "Landroid/app/Activity;", [
            Method("<init>", code=[("invoke-direct", ("Landroid/app/Activity;", "<init>", "V", ()), [0]),
                                   ("return-void",)]),
            bank_post_method(path),
        ], source_file=cls + ".java"))
    dex.add_class(ClassDef(BANK + "ViewStatement;", "Landroid/app/Activity;", [
        Method("<init>", code=[("invoke-direct", ("Landroid/app/Activity;", "<init>", "V", ()), [0]),
                               ("return-void",)]),
        strings_method("loadStatement", ["Statements_", ".html", "file:///android_asset/statement.html"]),
    ]))
    dex.add_class(ClassDef(BANK + "LoginActivity;", "Landroid/app/Activity;", [
        Method("<init>", code=[("invoke-direct", ("Landroid/app/Activity;", "<init>", "V", ()), [0]),
                               ("return-void",)]),
        strings_method("onCreate", [
            "https://fonts.gstatic.com/s/roboto/v18/KFOmCnqEu92Fr1Mu4mxP.ttf",
            "mySharedPreferences",
            "superSecurePassword",
        ]),
    ]))
    dex.add_class(ClassDef(BANK + "CryptoClass;", OBJECT, [
        object_init(),
        strings_method("aesEncryptedString", ["This is the super secret key 123", "AES/CBC/PKCS5Padding"]),
    ]))
    classes = dex.build()

    perms = ["android.permission.INTERNET", "android.permission.WRITE_EXTERNAL_STORAGE",
             "android.permission.SEND_SMS", "android.permission.USE_CREDENTIALS",
             "android.permission.GET_ACCOUNTS", "android.permission.READ_PROFILE",
             "android.permission.READ_CONTACTS", "android.permission.READ_PHONE_STATE",
             "android.permission.READ_EXTERNAL_STORAGE", "android.permission.READ_CALL_LOG",
             "android.permission.ACCESS_NETWORK_STATE", "android.permission.ACCESS_COARSE_LOCATION",
             "android.permission.INTERNET"]
    app = ("application", [(A, "label", "InsecureBankv2"), (A, "exported", True)], [
        ("activity", [(A, "name", ".LoginActivity")], []),
        ("activity", [(A, "name", ".FilePrefActivity")], []),
        ("activity", [(A, "name", ".DoLogin")], []),
        ("activity", [(A, "name", ".PostLogin"), (A, "exported", True)], []),
        ("activity", [(A, "name", ".WrongLogin")], []),
        ("activity", [(A, "name", ".DoTransfer"), (A, "exported", True)], []),
        ("activity", [(A, "name", ".ViewStatement"), (A, "exported", True)], []),
        ("activity", [(A, "name", ".ChangePassword"), (A, "exported", True)], []),
        ("provider", [(A, "name", ".TrackUserContentProvider"),
                      (A, "authorities", "com.android.insecurebankv2.TrackUserContentProvider")], []),
        ("receiver", [(A, "name", ".MyBroadCastReceiver"), (A, "exported", True)], []),
        ("meta-data", [(A, "name", "com.google.android.gms.version"), (A, "value", ("ref", 0x7F0B0001))], []),
    ])
    m = manifest(BANK_PKG, [perm(p) for p in perms] + [app], sdk=(15, 15))
    axml = AxmlBuilder(utf8=False).build(m)
    write_apk(os.path.join(out, "bank.apk"), [
        ("AndroidManifest.xml", axml, zipfile.ZIP_DEFLATED),
        ("classes.dex", classes, zipfile.ZIP_DEFLATED),
        ("resources.arsc", b"\x02\x00\x0c\x00" + b"\x00" * 124, zipfile.ZIP_STORED),
        ("assets/statement.html", b"<html><body>Statement</body></html>\n", zipfile.ZIP_DEFLATED),
        ("META-INF/MANIFEST.MF", b"Manifest-Version: 1.0\r\nCreated-By: 1.0 (Android)\r\n\r\n",
         zipfile.ZIP_DEFLATED),
    ])

    base = "http://insecurebankv2.local:8888"
    form = {"Content-Type": "application/x-www-form-urlencoded",
            "User-Agent": "Apache-HttpClient/UNAVAILABLE (java 1.4)"}
    lines = [
        {"ts": "2022-11-01T10:00:00Z", "api": "org.apache.http.impl.client.DefaultHttpClient.execute",
         "url": base + "/login", "method": "POST", "headers": form,
         "body": "username=dinesh&password=Dinesh%40123%24"},
        {"ts": "2022-11-01T10:00:05Z", "api": "org.apache.http.impl.client.DefaultHttpClient.execute",
         "url": base + "/dotransfer", "method": "POST", "headers": form,
         "body": "username=dinesh&password=Dinesh%40123%24&from_acc=888888888&to_acc=666666666&amount=100"},
        {"ts": "2022-11-01T10:00:09Z", "api": "org.apache.http.impl.client.DefaultHttpClient.execute",
         "url": base + "/changepassword", "method": "POST", "headers": form,
         "body": "username=dinesh&newpassword=Dinesh%40321%24"},
        {"ts": "2022-11-01T10:00:12Z", "api": "org.apache.http.impl.client.DefaultHttpClient.execute",
         "url": base + "/login", "method": "POST", "headers": form,
         "body": "username=jack&password=Jack%40123%24"},
    ]
    write_ndjson(os.path.join(out, "bank.ndjson"), lines)
    return axml, classes


# ---------------------------------------------------------------------------
# hirect: recruitment app, multi-dex, third-party SDKs in the secondary dex

HIRECT_PKG = "in.hirect"
API = "https://api.hirectapp.com"


def build_hirect(out):
    rng = random.Random(20221101)
    base62 = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    b64 = base62 + "+/"
    wechat_secret = "".join(rng.choice(base62) for _ in range(32))
    auth_token = "".join(rng.choice(base62 + "-_") for _ in range(40))
    feedback_payload = "".join(rng.choice(b64) for _ in range(48))
    google_key = "AIzaSyD-" + "".join(rng.choice(base62 + "-_") for _ in range(31))
    assert len(google_key) == 39

    app_urls = [
        API + "/v1/account/login",
        API + "/v1/account/otp/send",
        API + "/v1/account/logout",
        API + "/v1/jobs/recommend",
        API + "/v1/jobs/search?page=1",
        API + "/v1/jobs/detail",
        API + "/v1/jobs/apply",
        API + "/v1/candidate/resume",
        API + "/v1/company/{id}",
        API + "/v1/chat/sessions",
        "https://seekermsg.hirectapp.com/msg",
        API + "/v1/notifications",
        API + "/v1/config/app",
        API + "/v1/jobs/search",
    ]
    dex1 = DexBuilder()
    dex1.add_class(ClassDef("Lin/hirect/net/ApiRoutes;", OBJECT, [
        object_init(), strings_method("routes", app_urls)], source_file="ApiRoutes.kt"))
    dex1.add_class(ClassDef("Lin/hirect/net/ApiClient;", OBJECT, [
        object_init(),
        Method("open", direct=False, code=[
            ("const-string", 0, API + "/v1/account/login"),
            ("new-instance", 1, URL),
            ("invoke-direct", URL_INIT, [1, 0]),
            ("invoke-virtual", URL_OPEN, [1]),
            ("move-result-object", 2),
            ("check-cast", 2, HTTP_URL_CONNECTION),
            ("const-string", 3, "POST"),
            ("invoke-virtual", HUC_SET_METHOD, [2, 3]),
            ("invoke-virtual", HUC_CONNECT, [2]),
            ("invoke-virtual", ("Landroid/net/NetworkInfo;", "isConnected", "Z", ()), [1]),
            ("return-void",),
        ]),
    ]))
    dex1.add_class(ClassDef("Lin/hirect/ui/ChatActivity;", "Landroid/app/Activity;", [
        Method("<init>", code=[("invoke-direct", ("Landroid/app/Activity;", "<init>", "V", ()), [0]),
                               ("return-void",)]),
        strings_method("onCreate", ["content://in.hirect.fileprovider/images", "chat_session", "hello"]),
    ]))
    classes1 = dex1.build()

    dex2 = DexBuilder()
    dex2.add_class(ClassDef("Lcom/crashlytics/android/core/SettingsClient;", OBJECT, [
        object_init(),
        Method("fetch", direct=False, code=[
            ("const-string", 0, "https://settings.crashlytics.com/spi/v2/platforms/android/apps/in.hirect/settings"),
            ("const-string", 1, "https://e.crashlytics.com/spi/v2/events"),
            ("new-instance", 2, URL),
            ("invoke-direct", URL_INIT, [2, 0]),
            ("invoke-virtual", URL_OPEN, [2]),
            ("return-void",),
        ]),
    ]))
    dex2.add_class(ClassDef("Lcom/tencent/mm/opensdk/Config;", OBJECT, [
        object_init(),
        strings_method("endpoints", ["https://api.wechat.com/sns/oauth2/access_token",
                                      "https://bcdn.wechat.com/cdn/sdk/config", wechat_secret]),
    ]))
    dex2.add_class(ClassDef("Lin/hirect/BuildConfig;", OBJECT, [
        object_init(), strings_method("values", [google_key, "release", HIRECT_PKG])]))
    dex2.ref_method("Ljava/net/HttpCookie;", "parse", "Ljava/util/List;", (STRING,))
    classes2 = dex2.build()

    perms = ["android.permission.INTERNET", "android.permission.ACCESS_NETWORK_STATE",
             "android.permission.CAMERA", "android.permission.READ_EXTERNAL_STORAGE",
             "android.permission.RECORD_AUDIO", "android.permission.WAKE_LOCK",
             "android.permission.RECEIVE_BOOT_COMPLETED", "com.google.android.c2dm.permission.RECEIVE",
             "in.hirect.permission.C2D_MESSAGE"]
    app = ("application", [(A, "label", "Hirect")], [
        ("activity", [(A, "name", ".ui.MainActivity"), (A, "exported", True)], []),
        ("activity", [(A, "name", ".ui.ChatActivity")], []),
        ("service", [(A, "name", ".push.PushService")], []),
        ("receiver", [(A, "name", ".push.BootReceiver")], []),
        ("provider", [(A, "name", "androidx.core.content.FileProvider"),
                      (A, "authorities", "in.hirect.fileprovider")], []),
        ("meta-data", [(A, "name", "io.fabric.ApiKey"), (A, "value", "5f1a8c3e9b2d4f6a7c8e0b1d3f5a7c9e1b3d5f7a")], []),
        ("meta-data", [(A, "name", "com.google.android.geo.API_KEY"), (A, "value", google_key)], []),
        ("meta-data", [(A, "name", "com.facebook.sdk.ApplicationId"), (A, "value", ("ref", 0x7F0F0021))], []),
    ])
    m = manifest(HIRECT_PKG, [perm(p) for p in perms] + [app], sdk=(21, 31))
    axml = AxmlBuilder(utf8=True).build(m)
    write_apk(os.path.join(out, "hirect.apk"), [
        ("AndroidManifest.xml", axml, zipfile.ZIP_DEFLATED),
        ("classes.dex", classes1, zipfile.ZIP_DEFLATED),
        ("classes2.dex", classes2, zipfile.ZIP_DEFLATED),
        ("resources.arsc", b"\x02\x00\x0c\x00" + b"\x00" * 252, zipfile.ZIP_STORED),
        ("assets/fonts/readme.txt", b"fonts\n", zipfile.ZIP_STORED),
    ], signing_block=True)

    ua = "okhttp/4.9.0"
    json_headers = {"Content-Type": "application/json; charset=utf-8", "User-Agent": ua}
    lines = [
        {"ts": "2022-11-02T09:00:00Z", "api": "java.net.HttpURLConnection.connect",
         "url": API + "/v1/account/otp/send", "method": "POST", "headers": json_headers,
         "body": json.dumps({"phone": "+919876543210"}, separators=(",", ":"))},
        {"ts": "2022-11-02T09:00:20Z", "api": "java.net.HttpURLConnection.connect",
         "url": API + "/v1/account/login", "method": "POST", "headers": json_headers,
         "body": json.dumps({"phone": "+919876543210", "otp": "482913"}, separators=(",", ":"))},
        {"ts": "2022-11-02T09:00:21Z", "api": "java.net.URL.<init>",
         "args": [API + "/v1/jobs/recommend"]},
        {"ts": "2022-11-02T09:00:25Z", "api": "java.net.HttpURLConnection.connect",
         "url": API + "/v1/jobs/search?q=android&page=1", "method": "GET", "headers": {"User-Agent": ua}},
        {"ts": "2022-11-02T09:00:31Z", "api": "java.net.HttpURLConnection.connect",
         "url": API + "/v1/candidate/profile", "method": "GET",
         "headers": {"User-Agent": ua, "X-Auth-Token": auth_token}},
        {"ts": "2022-11-02T09:01:02Z", "api": "java.net.HttpURLConnection.connect",
         "url": "https://seekermsg.hirectapp.com/msg?session_id=s-1029&limit=20", "method": "GET",
         "headers": {"User-Agent": ua}},
        {"ts": "2022-11-02T09:02:10Z", "api": "java.net.HttpURLConnection.connect",
         "url": API + "/v1/feedback", "method": "POST", "headers": json_headers,
         "body": json.dumps({"category": "app", "payload": feedback_payload}, separators=(",", ":"))},
        {"ts": "2022-11-02T09:02:40Z", "api": "java.net.HttpURLConnection.connect",
         "url": "https://im.hirectapp.com/ws/token", "method": "POST",
         "headers": {"Content-Type": "application/x-www-form-urlencoded", "User-Agent": ua},
         "body": "uid=10293&device=android"},
    ]
    write_ndjson(os.path.join(out, "hirect.ndjson"), lines)
    return axml, (classes1, classes2)


def build_nodex(out):
    m = manifest("com.example.nodex", [perm("android.permission.INTERNET"),
                                       ("application", [(A, "label", "NoDex")], [])])
    axml = AxmlBuilder(utf8=True, obfuscate_names=True).build(m)
    write_apk(os.path.join(out, "nodex.apk"), [
        ("AndroidManifest.xml", axml, zipfile.ZIP_DEFLATED),
        ("assets/readme.txt", b"no code here\n", zipfile.ZIP_DEFLATED),
    ])
    lines = [
        {"ts": "2022-11-03T12:00:00Z", "api": "java.net.HttpURLConnection.connect",
         "url": "https://api.nodex.example.com/v2/ping", "method": "GET"},
    ]
    write_ndjson(os.path.join(out, "nodex.ndjson"), lines)


def write_ndjson(path, lines):
    with open(path, "w", encoding="utf-8") as f:
        for line in lines:
            f.write(json.dumps(line, separators=(",", ":"), ensure_ascii=False) + "\n")


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..")
    os.makedirs(out, exist_ok=True)
    build_sample(out)
    build_bank(out)
    build_hirect(out)
    build_nodex(out)
    # A valid zip without a manifest, and a non-zip.
    write_apk(os.path.join(out, "nomanifest.zip"), [("classes.dex", b"dex\n035\x00", zipfile.ZIP_STORED)])
    with open(os.path.join(out, "not_a_zip.txt"), "w") as f:
        f.write("this is a plain text file, not an archive\n")
    with open(os.path.join(out, "plain_manifest.xml"), "w") as f:
        f.write('<?xml version="1.0" encoding="utf-8"?>\n'
                '<manifest xmlns:android="http://schemas.android.com/apk/res/android" package="com.example.plain">\n'
                '  <uses-permission android:name="android.permission.INTERNET"/>\n'
                '</manifest>\n')


if __name__ == "__main__":
    main()

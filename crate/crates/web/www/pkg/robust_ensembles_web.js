/* @ts-self-types="./robust_ensembles_web.d.ts" */

/**
 * The most robust ensemble, as shown in the page's result table.
 */
export class Optimum {
    static __wrap(ptr) {
        const obj = Object.create(Optimum.prototype);
        obj.__wbg_ptr = ptr;
        OptimumFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        OptimumFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_optimum_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get alpha() {
        const ret = wasm.__wbg_get_optimum_alpha(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get beta() {
        const ret = wasm.__wbg_get_optimum_beta(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get gamma() {
        const ret = wasm.__wbg_get_optimum_gamma(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {boolean}
     */
    get on_boundary() {
        const ret = wasm.__wbg_get_optimum_on_boundary(this.__wbg_ptr);
        return ret !== 0;
    }
    /**
     * NaN when the coherent ensemble never reaches the threshold.
     * @returns {number}
     */
    get tau_coherent() {
        const ret = wasm.__wbg_get_optimum_tau_coherent(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get tau() {
        const ret = wasm.__wbg_get_optimum_tau(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {number} arg0
     */
    set alpha(arg0) {
        wasm.__wbg_set_optimum_alpha(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set beta(arg0) {
        wasm.__wbg_set_optimum_beta(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set gamma(arg0) {
        wasm.__wbg_set_optimum_gamma(this.__wbg_ptr, arg0);
    }
    /**
     * @param {boolean} arg0
     */
    set on_boundary(arg0) {
        wasm.__wbg_set_optimum_on_boundary(this.__wbg_ptr, arg0);
    }
    /**
     * NaN when the coherent ensemble never reaches the threshold.
     * @param {number} arg0
     */
    set tau_coherent(arg0) {
        wasm.__wbg_set_optimum_tau_coherent(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set tau(arg0) {
        wasm.__wbg_set_optimum_tau(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) Optimum.prototype[Symbol.dispose] = Optimum.prototype.free;

/**
 * @param {number} chi
 * @param {number} nu
 * @param {number} lambda
 * @param {boolean} purity
 * @param {number} gamma_points
 * @param {number} beta_points
 * @returns {string}
 */
export function contourSvg(chi, nu, lambda, purity, gamma_points, beta_points) {
    let deferred2_0;
    let deferred2_1;
    try {
        const ret = wasm.contourSvg(chi, nu, lambda, purity, gamma_points, beta_points);
        var ptr1 = ret[0];
        var len1 = ret[1];
        if (ret[3]) {
            ptr1 = 0; len1 = 0;
            throw takeFromExternrefTable0(ret[2]);
        }
        deferred2_0 = ptr1;
        deferred2_1 = len1;
        return getStringFromWasm0(ptr1, len1);
    } finally {
        wasm.__wbindgen_free(deferred2_0, deferred2_1, 1);
    }
}

/**
 * @param {number} chi
 * @param {number} nu
 * @param {number} beta
 * @param {number} gamma
 * @param {number} t_end
 * @returns {string}
 */
export function ellipseSvg(chi, nu, beta, gamma, t_end) {
    let deferred2_0;
    let deferred2_1;
    try {
        const ret = wasm.ellipseSvg(chi, nu, beta, gamma, t_end);
        var ptr1 = ret[0];
        var len1 = ret[1];
        if (ret[3]) {
            ptr1 = 0; len1 = 0;
            throw takeFromExternrefTable0(ret[2]);
        }
        deferred2_0 = ptr1;
        deferred2_1 = len1;
        return getStringFromWasm0(ptr1, len1);
    } finally {
        wasm.__wbindgen_free(deferred2_0, deferred2_1, 1);
    }
}

/**
 * @param {number} chi
 * @param {number} nu
 * @param {number} lambda
 * @param {boolean} constrained
 * @param {boolean} purity
 * @returns {Optimum}
 */
export function optimize(chi, nu, lambda, constrained, purity) {
    const ret = wasm.optimize(chi, nu, lambda, constrained, purity);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Optimum.__wrap(ret[0]);
}

/**
 * @param {number} chi
 * @param {number} nu
 * @param {number} lambda
 * @param {number} beta
 * @param {number} gamma
 * @param {boolean} purity
 * @param {number} t_max
 * @returns {string}
 */
export function survivalSvg(chi, nu, lambda, beta, gamma, purity, t_max) {
    let deferred2_0;
    let deferred2_1;
    try {
        const ret = wasm.survivalSvg(chi, nu, lambda, beta, gamma, purity, t_max);
        var ptr1 = ret[0];
        var len1 = ret[1];
        if (ret[3]) {
            ptr1 = 0; len1 = 0;
            throw takeFromExternrefTable0(ret[2]);
        }
        deferred2_0 = ptr1;
        deferred2_1 = len1;
        return getStringFromWasm0(ptr1, len1);
    } finally {
        wasm.__wbindgen_free(deferred2_0, deferred2_1, 1);
    }
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg_Error_30c8987f7c2ed4e2: function(arg0, arg1) {
            const ret = Error(getStringFromWasm0(arg0, arg1));
            return ret;
        },
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./robust_ensembles_web_bg.js": import0,
    };
}

const OptimumFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_optimum_free(ptr, 1));

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('robust_ensembles_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
